#pragma once

// The six manipulators, and their composition into per-event render
// directives.

#include <string>
#include <utility>
#include <vector>

#include "mrmix/dsp.hpp"
#include "mrmix/scene.hpp"

namespace mrmix {

enum class DirectiveKind { Event, Ambient, Earcon };

struct RenderDirective {
  DirectiveKind kind = DirectiveKind::Event;
  std::string event_id;
  std::string source;  ///< empty for earcons
  std::string clip;
  double actual_onset = 0.0;
  /// Playback window in seconds; 0 plays the whole clip once.
  double duration = 0.0;
  bool loop = false;
  /// Linear gain before distance attenuation and panning.
  double gain = 1.0;
  /// Resample ratio applied before filtering (1 = untouched).
  double pitch_ratio = 1.0;
  std::vector<dsp::FilterStage> filter_chain;
  Placement placement = EarPlacement{Ear::Both};
  std::vector<std::pair<std::string, double>> appended_earcons;
  std::vector<std::string> tags;
  bool dropped = false;
};

/// RW volume: S_default - (1 - tau) * S_default * eta, tau evaluated at `t`.
double transparency_volume(const TransparencyParams& params, double t);

/// RW high-pass cutoff (1 - tau) * Z in Hz; 0 means no filter.
double transparency_cutoff(const TransparencyParams& params, double t);

/// 10^(-(rank - 1) * step_db / 20); 1 for sources without a rank.
double envelope_gain(const ManipulationPlan& plan, const SoundSource& source);

Placement position_override(const ManipulationPlan& plan, const SoundSource& source);

struct StyleChain {
  std::vector<dsp::FilterStage> filters;
  double pitch_ratio = 1.0;
  bool empty() const { return filters.empty() && pitch_ratio == 1.0; }
};

/// LowPass/HighPass give one biquad, Telephone a high-pass then low-pass
/// cascade, PitchScale a resample ratio. Invalid cutoffs throw.
StyleChain style_chain(const ManipulationPlan& plan, const SoundSource& source);

/// Times at which the listener crosses into the sphere of `radius` around
/// `center`, including t = first waypoint when it starts inside.
std::vector<double> proximity_entries(const ListenerPath& path, Vec3 center, double radius);

/// Earcon cues for a finalized (post time shift) set of entries, sorted by
/// onset. Event triggers fire lead_time before the event (clamped at 0);
/// proximity triggers fire on each entry into the radius.
std::vector<EarconCue> attach_earcons(const ManipulationPlan& plan, const Scene& scene,
                                      const std::vector<TimelineEntry>& entries);

struct CompiledScene {
  /// Ambient beds, then identifiable events (both in scene order), then
  /// earcons. Render mixes in this order.
  std::vector<RenderDirective> directives;
  Timeline timeline;
};

/// Applies, in order: time shift, transparency, envelope, style, position,
/// sound append.
CompiledScene compile_directives(const Scene& scene, const ManipulationPlan& plan);

}  // namespace mrmix
