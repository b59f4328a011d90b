#include "mrmix/time_shift.hpp"

#include <algorithm>
#include <numeric>

namespace mrmix {

namespace {

struct Obstacle {
  double start;
  double end;
};

bool clears(double onset, double duration, const std::vector<Obstacle>& obstacles) {
  const double end = onset + duration;
  for (const auto& o : obstacles)
    if (onset < o.end && o.start < end) return false;
  return true;
}

double earliest_clear_onset(double lower, double duration, const std::vector<Obstacle>& obstacles) {
  // The feasible set is a union of left-closed intervals, so its minimum is
  // either `lower` itself or the end of some obstacle.
  std::vector<double> candidates{lower};
  for (const auto& o : obstacles)
    if (o.end > lower) candidates.push_back(o.end);
  std::sort(candidates.begin(), candidates.end());
  for (double t : candidates)
    if (clears(t, duration, obstacles)) return t;
  return candidates.back();  // unreachable: the last obstacle end is always clear
}

}  // namespace

std::vector<TimelineEntry> timeline_entries(const Scene& scene) {
  std::vector<TimelineEntry> out;
  out.reserve(scene.events.size());
  for (const auto& ev : scene.events) {
    TimelineEntry e;
    e.event_id = ev.id;
    e.source = ev.source;
    if (const SoundSource* src = scene.find_source(ev.source)) {
      e.identification_key = src->identification_key;
      e.category = src->category;
    }
    e.scheduled_onset = ev.scheduled_onset;
    e.actual_onset = ev.scheduled_onset;
    e.duration = ev.duration;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ProtectedInterval> protected_intervals(const Scene& scene,
                                                   const ManipulationPlan& plan) {
  std::vector<ProtectedInterval> out;
  if (!plan.time_shift.enabled) return out;
  for (const auto& ev : scene.events) {
    const SoundSource* src = scene.find_source(ev.source);
    if (src == nullptr || src->category != SoundCategory::RealWorld) continue;
    const bool matched = std::any_of(
        plan.time_shift.protected_selectors.begin(), plan.time_shift.protected_selectors.end(),
        [&](const std::string& sel) { return selector_specificity(sel, *src) > 0; });
    if (matched) out.push_back({ev.scheduled_onset, ev.end(), ev.source});
  }
  return out;
}

std::vector<TimelineEntry> time_shift(std::vector<TimelineEntry> entries,
                                      std::span<const ProtectedInterval> protected_spans,
                                      double guard_gap, double scene_duration) {
  std::vector<Obstacle> obstacles;
  obstacles.reserve(protected_spans.size() + entries.size());
  for (const auto& p : protected_spans) obstacles.push_back({p.start - guard_gap, p.end + guard_gap});

  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].scheduled_onset < entries[b].scheduled_onset;
  });

  const double horizon = scene_duration + kOverrunAllowance;
  double last_delayed_onset = -1.0;
  for (std::size_t idx : order) {
    TimelineEntry& e = entries[idx];
    e.actual_onset = e.scheduled_onset;
    e.dropped = false;
    std::erase(e.applied_manipulations, std::string(tag::kTimeShift));
    if (e.category == SoundCategory::Virtual &&
        !clears(e.scheduled_onset, e.duration, obstacles)) {
      const double lower = std::max(e.scheduled_onset, last_delayed_onset);
      e.actual_onset = earliest_clear_onset(lower, e.duration, obstacles);
      e.applied_manipulations.emplace_back(tag::kTimeShift);
      if (e.actual_onset + e.duration <= horizon) {
        obstacles.push_back({e.actual_onset - guard_gap, e.actual_onset + e.duration + guard_gap});
        last_delayed_onset = e.actual_onset;
      }
    }
    e.dropped = e.actual_onset + e.duration > horizon;
  }

  std::vector<TimelineEntry> sorted;
  sorted.reserve(entries.size());
  std::vector<std::size_t> by_actual(entries.size());
  std::iota(by_actual.begin(), by_actual.end(), std::size_t{0});
  std::stable_sort(by_actual.begin(), by_actual.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].actual_onset < entries[b].actual_onset;
  });
  for (std::size_t idx : by_actual) sorted.push_back(std::move(entries[idx]));
  return sorted;
}

}  // namespace mrmix
