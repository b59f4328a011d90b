#pragma once

// Sample-level building blocks. Processing runs in double precision on
// caller-owned buffers; nothing here allocates global state.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mrmix/scene.hpp"

namespace mrmix::dsp {

/// Normalized (a0 == 1) second-order section.
struct BiquadCoeffs {
  double b0 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;

  /// Both poles strictly inside the unit circle.
  bool stable() const;
  friend bool operator==(const BiquadCoeffs&, const BiquadCoeffs&) = default;
};

struct Bypass {
  friend bool operator==(const Bypass&, const Bypass&) = default;
};

using FilterStage = std::variant<Bypass, BiquadCoeffs>;

struct StereoBuffer {
  std::vector<double> left;
  std::vector<double> right;

  StereoBuffer() = default;
  explicit StereoBuffer(std::size_t frames) : left(frames, 0.0), right(frames, 0.0) {}
  std::size_t frames() const { return left.size(); }
  void resize(std::size_t frames) {
    left.resize(frames, 0.0);
    right.resize(frames, 0.0);
  }
  friend bool operator==(const StereoBuffer&, const StereoBuffer&) = default;
};

struct PanGains {
  double left = 0.0;
  double right = 0.0;
};

inline constexpr double kQButterworth = 0.70710678118654752440;
inline constexpr double kRearGain = 0.7;

/// Equal-power law: theta = (azimuth + pi/2) / 2, gains (cos theta, sin theta).
/// Azimuth is clamped to [-pi/2, pi/2]; -pi/2 is hard left.
PanGains pan_gains(double azimuth);

StereoBuffer pan_equal_power(std::span<const double> mono, double azimuth);

/// Azimuth in (-pi, pi] of `offset` (source minus listener, world frame)
/// seen by a listener with heading `yaw`; positive is to the right.
double azimuth_of(Vec3 offset, double yaw);

struct FoldedAzimuth {
  double azimuth = 0.0;  ///< within [-pi/2, pi/2]
  double gain = 1.0;     ///< kRearGain for sources behind the listener
};

/// Mirror a rear azimuth onto the nearer side of the frontal half-plane.
FoldedAzimuth fold_rear(double azimuth);

/// Inverse-distance law clamped at `min_distance`: result in (0, 1].
double distance_gain(double distance, double min_distance = 1.0);

/// Audio-EQ-cookbook designs. Throw InvariantError unless
/// 0 < cutoff < kSampleRate / 2.
BiquadCoeffs design_highpass(double cutoff, double q = kQButterworth);
BiquadCoeffs design_lowpass(double cutoff, double q = kQButterworth);

/// Direct form I with zero initial state.
std::vector<double> apply_filter(std::span<const double> input, const FilterStage& stage);
void apply_filter_in_place(std::vector<double>& buffer, const FilterStage& stage);

inline constexpr double kMinResampleRatio = 0.25;
inline constexpr double kMaxResampleRatio = 4.0;

/// Linear-interpolation resampling read at `ratio` input samples per output
/// sample: pitch scales by `ratio`, length by 1 / ratio.
std::vector<double> resample_ratio(std::span<const double> input, double ratio);
AudioClip resample_ratio(const AudioClip& clip, double ratio);

/// dest[i + offset] += gain * src[i], growing dest as needed.
void mix_into(StereoBuffer& dest, const StereoBuffer& src, std::size_t offset, double gain);

/// Adds a mono signal with per-channel gains; same growth rule as mix_into.
void mix_mono_into(StereoBuffer& dest, std::span<const double> mono, std::size_t offset,
                   PanGains gains);

struct ClipReport {
  std::size_t clipped_samples = 0;
};

struct Finalized {
  StereoBuffer buffer;
  ClipReport report;
};

/// Scale by `master_gain`, then hard-clamp to [-1, 1] counting clamped samples.
Finalized finalize(StereoBuffer buffer, double master_gain = 1.0);

}  // namespace mrmix::dsp
