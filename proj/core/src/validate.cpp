#include "mrmix/validate.hpp"

#include <cmath>
#include <map>
#include <set>

#include "mrmix/time_shift.hpp"

namespace mrmix {

namespace {

// Slack for sums of decimal seconds such as onset + duration.
constexpr double kTimeEps = 1e-9;

bool finite(double v) { return std::isfinite(v); }

class Collector {
 public:
  void add(std::string rule, std::string message) {
    out_.push_back({std::move(rule), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

void check_events(const Scene& s, const std::vector<SoundEvent>& events, bool identifiable,
                  std::set<std::string>& ids, Collector& c) {
  for (const auto& e : events) {
    const std::string name = "event '" + e.id + "'";
    if (!ids.insert(e.id).second) c.add("event.id_unique", name + " appears more than once");
    const SoundSource* src = s.find_source(e.source);
    if (src == nullptr) {
      c.add("event.source_exists", name + " references missing source '" + e.source + "'");
    } else if (identifiable && !src->identification_key) {
      c.add("event.identifiable", name + " uses source '" + src->id + "' which has no key");
    } else if (!identifiable && src->identification_key) {
      c.add("ambient.not_identifiable",
            "ambient bed '" + e.id + "' uses identifiable source '" + src->id + "'");
    }
    if (!finite(e.scheduled_onset) || e.scheduled_onset < 0.0)
      c.add("event.onset_nonnegative", name + " starts before 0");
    if (!finite(e.duration) || e.duration <= 0.0)
      c.add("event.duration_positive", name + " has non-positive duration");
    else if (e.end() > s.duration + kTimeEps)
      c.add("event.within_duration", name + " ends at " + std::to_string(e.end()) +
                                         " s, after the scene end " + std::to_string(s.duration) + " s");
  }
}

void check_placement(const Placement& p, const std::string& name, std::string_view rule_prefix,
                     Collector& c) {
  if (const auto* sp = std::get_if<SpatialPlacement>(&p); sp != nullptr && !sp->position.finite())
    c.add(std::string(rule_prefix) + ".position_finite", name + " has a non-finite position");
}

bool cutoff_ok(double hz) { return finite(hz) && hz > 0.0 && hz < kSampleRate / 2.0; }

}  // namespace

std::vector<int> scenario_inventory(ScenarioId id) {
  switch (id) {
    case ScenarioId::RwFocused:
    case ScenarioId::VrFocused: return {5, 5, 5, 5};
    case ScenarioId::FullyMixed: return {6, 6, 5, 5};
  }
  return {};
}

std::vector<Violation> validate_scene(const Scene& s) {
  Collector c;
  if (!finite(s.duration) || s.duration <= 0.0)
    c.add("scene.duration_positive", "scene duration must be positive");

  std::set<std::string> source_ids;
  for (const auto& src : s.sources) {
    const std::string name = "source '" + src.id + "'";
    if (!source_ids.insert(src.id).second) c.add("source.id_unique", name + " appears more than once");
    if (src.identification_key && (*src.identification_key < 1 || *src.identification_key > 4))
      c.add("source.key_range", name + " has key " + std::to_string(*src.identification_key) +
                                    " outside 1..4");
    if (src.category == SoundCategory::RealWorld && !std::holds_alternative<SpatialPlacement>(src.placement))
      c.add("source.rw_spatial", name + " is real-world but not spatially placed");
    check_placement(src.placement, name, "source", c);
  }

  std::set<std::string> event_ids;
  check_events(s, s.ambient_beds, false, event_ids, c);
  check_events(s, s.events, true, event_ids, c);

  const auto& w = s.listener.waypoints;
  if (w.empty()) {
    c.add("listener.nonempty", "listener path has no waypoints");
  } else {
    if (w.front().time != 0.0) c.add("listener.starts_at_zero", "first waypoint must be at t = 0");
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0 && !(w[i].time > w[i - 1].time))
        c.add("listener.times_increasing", "waypoint " + std::to_string(i) + " is not after its predecessor");
      if (!w[i].position.finite() || !finite(w[i].yaw))
        c.add("listener.position_finite", "waypoint " + std::to_string(i) + " is not finite");
    }
  }

  if (s.scenario) {
    const std::vector<int> want = scenario_inventory(*s.scenario);
    std::map<int, int> have;
    for (const auto& e : s.events)
      if (const SoundSource* src = s.find_source(e.source); src && src->identification_key)
        ++have[*src->identification_key];
    for (std::size_t k = 0; k < want.size(); ++k) {
      const int key = static_cast<int>(k) + 1;
      if (have[key] != want[k])
        c.add("scenario.inventory", std::string(to_string(*s.scenario)) + " needs " +
                                        std::to_string(want[k]) + " events on key " +
                                        std::to_string(key) + ", found " + std::to_string(have[key]));
    }
  }
  return c.take();
}

std::vector<Violation> validate_plan(const ManipulationPlan& p) {
  Collector c;
  const auto& t = p.transparency;
  auto unit = [](double v) { return finite(v) && v >= 0.0 && v <= 1.0; };
  if (!unit(t.tau)) c.add("transparency.tau_range", "tau must lie in [0, 1]");
  if (!unit(t.eta)) c.add("transparency.eta_range", "eta must lie in [0, 1]");
  if (!(finite(t.s_default) && t.s_default > 0.0 && t.s_default <= 1.0))
    c.add("transparency.s_default_range", "s_default must lie in (0, 1]");
  if (!(finite(t.z) && t.z >= 0.0 && t.z < kSampleRate / 2.0))
    c.add("transparency.z_range", "baseline cutoff must lie in [0, 24000) Hz");
  for (std::size_t i = 0; i < t.tau_automation.size(); ++i) {
    const auto& pt = t.tau_automation[i];
    if (!unit(pt.tau)) c.add("transparency.tau_range", "automation point " + std::to_string(i) + " out of [0, 1]");
    if (!finite(pt.time) || (i > 0 && pt.time < t.tau_automation[i - 1].time))
      c.add("transparency.automation_sorted", "automation point " + std::to_string(i) + " is out of order");
  }

  for (const auto& [sel, rank] : p.envelope_ranks)
    if (rank < 1) c.add("envelope.rank_positive", "rank for '" + sel + "' must be >= 1");
  if (!finite(p.envelope_rank_step_db) || p.envelope_rank_step_db < 0.0)
    c.add("envelope.step_nonnegative", "rank step must be a non-negative number of dB");

  for (const auto& [sel, pl] : p.position_overrides)
    check_placement(pl, "override '" + sel + "'", "position", c);

  for (const auto& [sel, f] : p.style_filters) {
    const std::string name = "style for '" + sel + "'";
    if (const auto* lp = std::get_if<LowPass>(&f); lp && !cutoff_ok(lp->cutoff))
      c.add("style.cutoff_range", name + ": cutoff outside (0, 24000) Hz");
    if (const auto* hp = std::get_if<HighPass>(&f); hp && !cutoff_ok(hp->cutoff))
      c.add("style.cutoff_range", name + ": cutoff outside (0, 24000) Hz");
    if (const auto* tel = std::get_if<Telephone>(&f)) {
      if (!cutoff_ok(tel->low) || !cutoff_ok(tel->high))
        c.add("style.cutoff_range", name + ": cutoff outside (0, 24000) Hz");
      else if (!(tel->low < tel->high))
        c.add("style.telephone_order", name + ": low cutoff must be below high");
    }
    if (const auto* ps = std::get_if<PitchScale>(&f);
        ps && !(finite(ps->ratio) && ps->ratio >= 0.25 && ps->ratio <= 4.0))
      c.add("style.pitch_range", name + ": ratio outside [0.25, 4]");
  }

  if (!finite(p.time_shift.guard_gap) || p.time_shift.guard_gap < 0.0)
    c.add("time_shift.guard_nonnegative", "guard gap must be >= 0");

  for (std::size_t i = 0; i < p.earcons.size(); ++i) {
    const auto& e = p.earcons[i];
    const std::string name = "earcon " + std::to_string(i);
    if (!finite(e.lead_time) || e.lead_time < 0.0)
      c.add("earcon.lead_nonnegative", name + ": lead time must be >= 0");
    if (const auto* prox = std::get_if<OnProximity>(&e.trigger);
        prox && !(finite(prox->radius) && prox->radius > 0.0))
      c.add("earcon.radius_positive", name + ": radius must be > 0");
  }
  return c.take();
}

std::vector<Violation> validate_timeline(const Timeline& t) {
  Collector c;
  if (!finite(t.duration) || t.duration <= 0.0)
    c.add("timeline.duration_positive", "timeline duration must be positive");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const auto& e = t.entries[i];
    const std::string name = "entry '" + e.event_id + "'";
    if (!ids.insert(e.event_id).second) c.add("timeline.event_id_unique", name + " appears more than once");
    if (e.identification_key && (*e.identification_key < 1 || *e.identification_key > 4))
      c.add("timeline.key_range", name + " has a key outside 1..4");
    if (!finite(e.scheduled_onset) || e.scheduled_onset < 0.0)
      c.add("timeline.onset_nonnegative", name + " is scheduled before 0");
    if (!finite(e.duration) || e.duration <= 0.0)
      c.add("timeline.duration_positive", name + " has non-positive duration");
    if (!(e.actual_onset >= e.scheduled_onset))
      c.add("timeline.onset_monotonic", name + " starts at " + std::to_string(e.actual_onset) +
                                            " s, before its scheduled " +
                                            std::to_string(e.scheduled_onset) + " s");
    if (i > 0 && e.actual_onset < t.entries[i - 1].actual_onset)
      c.add("timeline.sorted", name + " is out of actual-onset order");
    if (!e.dropped && e.actual_onset + e.duration > t.duration + kOverrunAllowance + kTimeEps)
      c.add("timeline.within_overrun", name + " runs past the overrun allowance without being dropped");
    if (!finite(e.gain) || e.gain < 0.0) c.add("timeline.gain_nonnegative", name + " has a negative gain");
  }
  for (std::size_t i = 0; i < t.earcons.size(); ++i)
    if (!finite(t.earcons[i].onset) || t.earcons[i].onset < 0.0)
      c.add("timeline.earcon_onset_nonnegative", "earcon " + std::to_string(i) + " starts before 0");
  return c.take();
}

std::vector<Violation> validate_clip(const AudioClip& clip) {
  Collector c;
  if (clip.channels != 1 && clip.channels != 2) {
    c.add("clip.channels", "clip '" + clip.id + "' must be mono or stereo");
    return c.take();
  }
  if (clip.samples.size() % clip.channels != 0)
    c.add("clip.frame_aligned", "clip '" + clip.id + "' has a partial frame");
  for (float s : clip.samples) {
    if (!std::isfinite(s)) {
      c.add("clip.samples_finite", "clip '" + clip.id + "' has a non-finite sample");
      break;
    }
    if (s < -1.0f || s > 1.0f) {
      c.add("clip.sample_range", "clip '" + clip.id + "' has a sample outside [-1, 1]");
      break;
    }
  }
  return c.take();
}

}  // namespace mrmix
