#include "mrmix/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mrmix/errors.hpp"

namespace mrmix::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_cutoff(double cutoff) {
  if (!(cutoff > 0.0 && cutoff < kSampleRate / 2.0))
    throw InvariantError("filter.cutoff_range",
                         "cutoff " + std::to_string(cutoff) + " Hz outside (0, " +
                             std::to_string(kSampleRate / 2) + ")");
}

struct Prototype {
  double cos_w0;
  double alpha;
};

Prototype prototype(double cutoff, double q) {
  check_cutoff(cutoff);
  if (!(q > 0.0)) throw InvariantError("filter.q_positive", "q must be positive");
  const double w0 = 2.0 * kPi * cutoff / kSampleRate;
  return {std::cos(w0), std::sin(w0) / (2.0 * q)};
}

BiquadCoeffs normalize(double b0, double b1, double b2, double a0, double a1, double a2) {
  return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

}  // namespace

bool BiquadCoeffs::stable() const { return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2; }

PanGains pan_gains(double azimuth) {
  const double az = std::clamp(azimuth, -kPi / 2.0, kPi / 2.0);
  const double theta = (az + kPi / 2.0) / 2.0;
  return {std::cos(theta), std::sin(theta)};
}

StereoBuffer pan_equal_power(std::span<const double> mono, double azimuth) {
  StereoBuffer out;
  mix_mono_into(out, mono, 0, pan_gains(azimuth));
  return out;
}

double azimuth_of(Vec3 offset, double yaw) {
  const Vec3 right{std::cos(yaw), 0.0, -std::sin(yaw)};
  const Vec3 forward{std::sin(yaw), 0.0, std::cos(yaw)};
  const double lateral = offset.dot(right);
  const double ahead = offset.dot(forward);
  if (lateral == 0.0 && ahead == 0.0) return 0.0;
  return std::atan2(lateral, ahead);
}

FoldedAzimuth fold_rear(double azimuth) {
  if (azimuth > kPi / 2.0) return {kPi - azimuth, kRearGain};
  if (azimuth < -kPi / 2.0) return {-kPi - azimuth, kRearGain};
  return {azimuth, 1.0};
}

double distance_gain(double distance, double min_distance) {
  return min_distance / std::max(distance, min_distance);
}

BiquadCoeffs design_highpass(double cutoff, double q) {
  const auto [c, alpha] = prototype(cutoff, q);
  return normalize((1.0 + c) / 2.0, -(1.0 + c), (1.0 + c) / 2.0, 1.0 + alpha, -2.0 * c,
                   1.0 - alpha);
}

BiquadCoeffs design_lowpass(double cutoff, double q) {
  const auto [c, alpha] = prototype(cutoff, q);
  return normalize((1.0 - c) / 2.0, 1.0 - c, (1.0 - c) / 2.0, 1.0 + alpha, -2.0 * c,
                   1.0 - alpha);
}

void apply_filter_in_place(std::vector<double>& buffer, const FilterStage& stage) {
  const auto* k = std::get_if<BiquadCoeffs>(&stage);
  if (k == nullptr) return;
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double& s : buffer) {
    const double x0 = s;
    const double y0 = k->b0 * x0 + k->b1 * x1 + k->b2 * x2 - k->a1 * y1 - k->a2 * y2;
    x2 = x1;
    x1 = x0;
    y2 = y1;
    y1 = y0;
    s = y0;
  }
}

std::vector<double> apply_filter(std::span<const double> input, const FilterStage& stage) {
  std::vector<double> out(input.begin(), input.end());
  apply_filter_in_place(out, stage);
  return out;
}

std::vector<double> resample_ratio(std::span<const double> input, double ratio) {
  if (!(ratio >= kMinResampleRatio && ratio <= kMaxResampleRatio))
    throw InvariantError("resample.ratio_range",
                         "ratio " + std::to_string(ratio) + " outside [0.25, 4]");
  const std::size_t n = input.size();
  const auto out_len =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) / ratio));
  std::vector<double> out(out_len, 0.0);
  auto at = [&](std::size_t k) { return k < n ? input[k] : 0.0; };
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    out[i] = at(k) * (1.0 - frac) + at(k + 1) * frac;
  }
  return out;
}

AudioClip resample_ratio(const AudioClip& clip, double ratio) {
  AudioClip out;
  out.id = clip.id;
  out.channels = clip.channels;
  const std::size_t frames = clip.frames();
  std::vector<std::vector<double>> channels;
  for (int c = 0; c < clip.channels; ++c) {
    std::vector<double> ch(frames);
    for (std::size_t i = 0; i < frames; ++i) ch[i] = clip.samples[i * clip.channels + c];
    channels.push_back(resample_ratio(ch, ratio));
  }
  const std::size_t out_frames = channels.empty() ? 0 : channels.front().size();
  out.samples.resize(out_frames * clip.channels);
  for (std::size_t i = 0; i < out_frames; ++i)
    for (int c = 0; c < clip.channels; ++c)
      out.samples[i * clip.channels + c] = static_cast<float>(channels[c][i]);
  return out;
}

void mix_into(StereoBuffer& dest, const StereoBuffer& src, std::size_t offset, double gain) {
  if (dest.frames() < offset + src.frames()) dest.resize(offset + src.frames());
  for (std::size_t i = 0; i < src.frames(); ++i) {
    dest.left[offset + i] += gain * src.left[i];
    dest.right[offset + i] += gain * src.right[i];
  }
}

void mix_mono_into(StereoBuffer& dest, std::span<const double> mono, std::size_t offset,
                   PanGains gains) {
  if (dest.frames() < offset + mono.size()) dest.resize(offset + mono.size());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    dest.left[offset + i] += gains.left * mono[i];
    dest.right[offset + i] += gains.right * mono[i];
  }
}

Finalized finalize(StereoBuffer buffer, double master_gain) {
  Finalized out;
  auto process = [&](std::vector<double>& ch) {
    for (double& s : ch) {
      s *= master_gain;
      if (s > 1.0 || s < -1.0) {
        s = std::clamp(s, -1.0, 1.0);
        ++out.report.clipped_samples;
      }
    }
  };
  process(buffer.left);
  process(buffer.right);
  out.buffer = std::move(buffer);
  return out;
}

}  // namespace mrmix::dsp
