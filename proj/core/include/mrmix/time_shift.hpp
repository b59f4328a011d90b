#pragma once

#include <span>
#include <string>
#include <vector>

#include "mrmix/scene.hpp"

namespace mrmix {

/// Seconds a delayed event may run past the scene end before it is dropped.
inline constexpr double kOverrunAllowance = 5.0;

/// Span of an important real-world sound that virtual sounds must avoid.
struct ProtectedInterval {
  double start = 0.0;
  double end = 0.0;
  std::string source;
  friend bool operator==(const ProtectedInterval&, const ProtectedInterval&) = default;
};

/// One entry per identifiable event of `scene`, in scene order, with
/// actual_onset == scheduled_onset and no tags.
std::vector<TimelineEntry> timeline_entries(const Scene& scene);

/// One interval per identifiable real-world event whose source matches a
/// selector in `plan.time_shift.protected_selectors`. Intervals are returned
/// unmerged in scene order. Empty when time shift is disabled.
std::vector<ProtectedInterval> protected_intervals(const Scene& scene,
                                                   const ManipulationPlan& plan);

/// Delay virtual events so they never sound during a protected interval.
///
/// Events are swept in ascending scheduled onset (ties by input position).
/// Obstacles are the protected intervals and every virtual event delayed so
/// far, each inflated by `guard_gap` on both sides. A virtual event that
/// starts clear of all obstacles keeps its onset. Otherwise it moves to the
/// earliest onset >= max(scheduled onset, onset of the previously delayed
/// event) at which it clears every obstacle, and becomes an obstacle itself.
/// Real-world events never move.
///
/// Entries whose actual end exceeds `scene_duration + kOverrunAllowance` are
/// flagged `dropped`. Delayed entries gain the "time_shift" tag. The result
/// keeps every input entry and is sorted by actual onset.
std::vector<TimelineEntry> time_shift(std::vector<TimelineEntry> entries,
                                      std::span<const ProtectedInterval> protected_spans,
                                      double guard_gap, double scene_duration);

}  // namespace mrmix
