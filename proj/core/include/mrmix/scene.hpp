#pragma once

// Domain types shared by every stage of the pipeline: sources, events,
// listener motion, manipulation plans and the resulting timelines.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mrmix {

/// Engine-wide sample rate in Hz.
inline constexpr int kSampleRate = 48000;

/// Seconds to whole samples at kSampleRate (round half away from zero).
inline std::int64_t to_samples(double seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * kSampleRate));
}

/// Meters. Listener-forward is +z at yaw 0, +x is listener-right, +y is up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  double length() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

enum class SoundCategory { RealWorld, Virtual };

enum class Ear { Left, Right, Both };

/// World-space emitter. With `listener_relative` the position is expressed in
/// the listener's head frame and moves with them (e.g. the tip of a cane).
struct SpatialPlacement {
  Vec3 position;
  bool listener_relative = false;
  friend bool operator==(const SpatialPlacement&, const SpatialPlacement&) = default;
};

struct EarPlacement {
  Ear channel = Ear::Both;
  friend bool operator==(const EarPlacement&, const EarPlacement&) = default;
};

using Placement = std::variant<SpatialPlacement, EarPlacement>;

/// Decoded audio. Samples are interleaved when `channels == 2`.
struct AudioClip {
  std::string id;
  int channels = 1;
  std::vector<float> samples;

  std::size_t frames() const { return channels > 0 ? samples.size() / channels : 0; }
  double duration() const { return static_cast<double>(frames()) / kSampleRate; }
  /// Channel average, one value per frame.
  std::vector<double> mono() const;

  friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

struct SoundSource {
  std::string id;
  std::string clip;
  /// Free-form family name ("drilling", "navigation", ...) that plan
  /// selectors can target; several sources may share one group.
  std::string group;
  SoundCategory category = SoundCategory::RealWorld;
  Placement placement = SpatialPlacement{};
  /// 1..4 for sources the listener must identify; empty for ambience.
  std::optional<int> identification_key;
  /// RW sources flagged here are matched by the "protected" selector.
  bool is_protected = false;

  friend bool operator==(const SoundSource&, const SoundSource&) = default;
};

struct SoundEvent {
  std::string id;
  std::string source;
  double scheduled_onset = 0.0;
  double duration = 0.0;
  /// Repeat the clip to fill `duration` instead of playing it once.
  bool loop = false;

  double end() const { return scheduled_onset + duration; }
  friend bool operator==(const SoundEvent&, const SoundEvent&) = default;
};

struct Waypoint {
  double time = 0.0;
  Vec3 position;
  double yaw = 0.0;  ///< radians, positive turns toward +x
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct ListenerPose {
  Vec3 position;
  double yaw = 0.0;
};

/// Piecewise-linear listener trajectory; clamps outside the waypoint range.
struct ListenerPath {
  std::vector<Waypoint> waypoints;

  ListenerPose at(double t) const;
  friend bool operator==(const ListenerPath&, const ListenerPath&) = default;
};

enum class ScenarioId { RwFocused, VrFocused, FullyMixed };

struct Scene {
  std::string id;
  /// Template the scene was generated from; enables the inventory check.
  std::optional<ScenarioId> scenario;
  double duration = 0.0;
  std::uint64_t seed = 0;
  std::vector<SoundSource> sources;
  std::vector<SoundEvent> ambient_beds;
  std::vector<SoundEvent> events;
  ListenerPath listener;
  /// Clip id -> WAV path overriding the synthesized bank.
  std::map<std::string, std::string> clip_files;

  const SoundSource* find_source(std::string_view source_id) const;
  friend bool operator==(const Scene&, const Scene&) = default;
};

// ---------------------------------------------------------------------------
// Manipulation plans

struct TauPoint {
  double time = 0.0;
  double tau = 0.0;
  friend bool operator==(const TauPoint&, const TauPoint&) = default;
};

struct TransparencyParams {
  double tau = 1.0;
  double eta = 0.75;
  double s_default = 0.5;
  double z = 2000.0;
  /// Step automation: the latest point with time <= t wins; before the first
  /// point the static `tau` applies.
  std::vector<TauPoint> tau_automation;

  double tau_at(double t) const;
  friend bool operator==(const TransparencyParams&, const TransparencyParams&) = default;
};

struct LowPass {
  double cutoff = 0.0;
  friend bool operator==(const LowPass&, const LowPass&) = default;
};
struct HighPass {
  double cutoff = 0.0;
  friend bool operator==(const HighPass&, const HighPass&) = default;
};
struct Telephone {
  double low = 300.0;
  double high = 3400.0;
  friend bool operator==(const Telephone&, const Telephone&) = default;
};
struct PitchScale {
  double ratio = 1.0;
  friend bool operator==(const PitchScale&, const PitchScale&) = default;
};
using StyleFilter = std::variant<LowPass, HighPass, Telephone, PitchScale>;

struct OnEvent {
  std::string target;  ///< selector
  friend bool operator==(const OnEvent&, const OnEvent&) = default;
};
struct OnProximity {
  std::string target;  ///< selector; matched sources need Spatial placement
  double radius = 0.0;
  friend bool operator==(const OnProximity&, const OnProximity&) = default;
};
using EarconTrigger = std::variant<OnEvent, OnProximity>;

struct EarconAttachment {
  std::string earcon_clip;
  EarconTrigger trigger;
  double lead_time = 0.4;
  friend bool operator==(const EarconAttachment&, const EarconAttachment&) = default;
};

struct TimeShiftConfig {
  bool enabled = false;
  double guard_gap = 0.0;
  std::set<std::string> protected_selectors;
  friend bool operator==(const TimeShiftConfig&, const TimeShiftConfig&) = default;
};

/// Declarative configuration of all six manipulators for one condition.
///
/// The map-valued fields are keyed by selectors: a source id, a source group,
/// a category name ("real_world" / "virtual"), or "protected". When several
/// keys match one source the most specific wins (id > group > category).
struct ManipulationPlan {
  std::string name;
  TransparencyParams transparency;
  std::map<std::string, int> envelope_ranks;
  double envelope_rank_step_db = 3.0;
  std::map<std::string, Placement> position_overrides;
  std::map<std::string, StyleFilter> style_filters;
  TimeShiftConfig time_shift;
  std::vector<EarconAttachment> earcons;

  friend bool operator==(const ManipulationPlan&, const ManipulationPlan&) = default;
};

/// 0 = no match, 1 = category / "protected", 2 = group, 3 = exact id.
int selector_specificity(std::string_view selector, const SoundSource& source);

/// Most specific entry of `map` matching `source`, or nullptr.
template <class V>
const V* lookup_selector(const std::map<std::string, V>& map, const SoundSource& source) {
  const V* best = nullptr;
  int best_rank = 0;
  for (const auto& [key, value] : map) {
    const int rank = selector_specificity(key, source);
    if (rank > best_rank) {
      best_rank = rank;
      best = &value;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Timelines

namespace tag {
inline constexpr std::string_view kTransparency = "transparency";
inline constexpr std::string_view kEnvelope = "envelope";
inline constexpr std::string_view kPosition = "position";
inline constexpr std::string_view kStyle = "style";
inline constexpr std::string_view kTimeShift = "time_shift";
inline constexpr std::string_view kAppend = "append";
}  // namespace tag

struct TimelineEntry {
  std::string event_id;
  std::string source;
  std::optional<int> identification_key;
  SoundCategory category = SoundCategory::RealWorld;
  double scheduled_onset = 0.0;
  double actual_onset = 0.0;
  double duration = 0.0;
  /// Pushed past the overrun allowance; kept for the record, never rendered.
  bool dropped = false;
  std::vector<std::string> applied_manipulations;
  /// Directive gain (base volume x envelope) before distance attenuation.
  double gain = 0.0;

  bool has_tag(std::string_view t) const;
  friend bool operator==(const TimelineEntry&, const TimelineEntry&) = default;
};

struct EarconCue {
  std::string clip;
  double onset = 0.0;
  std::string trigger_source;
  /// Event that fired the cue; empty for proximity triggers.
  std::string trigger_event;
  friend bool operator==(const EarconCue&, const EarconCue&) = default;
};

struct Timeline {
  std::string scene_id;
  std::optional<ScenarioId> scenario;
  std::string condition;
  double duration = 0.0;
  std::vector<TimelineEntry> entries;  ///< sorted by actual_onset
  std::vector<EarconCue> earcons;

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

// ---------------------------------------------------------------------------
// Names used on disk and on the command line.

std::string_view to_string(SoundCategory c);
std::string_view to_string(Ear e);
std::string_view to_string(ScenarioId s);
std::optional<SoundCategory> category_from_string(std::string_view s);
std::optional<Ear> ear_from_string(std::string_view s);
/// Accepts "rw_focused"/"vr_focused"/"fully_mixed" and the short forms
/// "rw"/"vr"/"mixed".
std::optional<ScenarioId> scenario_from_string(std::string_view s);

}  // namespace mrmix
