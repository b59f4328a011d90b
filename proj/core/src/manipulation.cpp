#include "mrmix/manipulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mrmix/errors.hpp"
#include "mrmix/time_shift.hpp"

namespace mrmix {

namespace {

struct StyleVisitor {
  StyleChain& chain;
  void operator()(const LowPass& f) const { chain.filters.emplace_back(dsp::design_lowpass(f.cutoff)); }
  void operator()(const HighPass& f) const { chain.filters.emplace_back(dsp::design_highpass(f.cutoff)); }
  void operator()(const Telephone& f) const {
    if (!(f.low < f.high))
      throw InvariantError("style.telephone_order", "telephone low cutoff must be below high");
    chain.filters.emplace_back(dsp::design_highpass(f.low));
    chain.filters.emplace_back(dsp::design_lowpass(f.high));
  }
  void operator()(const PitchScale& f) const {
    if (!(f.ratio >= dsp::kMinResampleRatio && f.ratio <= dsp::kMaxResampleRatio))
      throw InvariantError("style.pitch_range", "pitch ratio outside [0.25, 4]");
    chain.pitch_ratio = f.ratio;
  }
};

bool matches(const std::string& selector, const SoundSource& source) {
  return selector_specificity(selector, source) > 0;
}

}  // namespace

double transparency_volume(const TransparencyParams& params, double t) {
  const double tau = params.tau_at(t);
  return params.s_default - (1.0 - tau) * params.s_default * params.eta;
}

double transparency_cutoff(const TransparencyParams& params, double t) {
  return (1.0 - params.tau_at(t)) * params.z;
}

double envelope_gain(const ManipulationPlan& plan, const SoundSource& source) {
  const int* rank = lookup_selector(plan.envelope_ranks, source);
  if (rank == nullptr) return 1.0;
  return std::pow(10.0, -(*rank - 1) * plan.envelope_rank_step_db / 20.0);
}

Placement position_override(const ManipulationPlan& plan, const SoundSource& source) {
  const Placement* p = lookup_selector(plan.position_overrides, source);
  return p != nullptr ? *p : source.placement;
}

StyleChain style_chain(const ManipulationPlan& plan, const SoundSource& source) {
  StyleChain chain;
  if (const StyleFilter* f = lookup_selector(plan.style_filters, source))
    std::visit(StyleVisitor{chain}, *f);
  return chain;
}

std::vector<double> proximity_entries(const ListenerPath& path, Vec3 center, double radius) {
  std::vector<double> out;
  const auto& w = path.waypoints;
  if (w.empty()) return out;
  const double r2 = radius * radius;
  auto inside = [&](Vec3 p) { return (p - center).dot(p - center) <= r2; };

  bool in = inside(w.front().position);
  if (in) out.push_back(w.front().time);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const Vec3 start = w[i].position - center;
    const Vec3 step = w[i + 1].position - w[i].position;
    const double a = step.dot(step);
    if (a > 0.0 && !in) {
      // |start + s * step|^2 = r^2, smaller root is where the path enters.
      const double b = 2.0 * start.dot(step);
      const double c = start.dot(start) - r2;
      const double disc = b * b - 4.0 * a * c;
      if (disc > 0.0) {
        const double s = (-b - std::sqrt(disc)) / (2.0 * a);
        if (s > 0.0 && s <= 1.0) out.push_back(w[i].time + s * (w[i + 1].time - w[i].time));
      }
    }
    in = inside(w[i + 1].position);
  }
  return out;
}

std::vector<EarconCue> attach_earcons(const ManipulationPlan& plan, const Scene& scene,
                                      const std::vector<TimelineEntry>& entries) {
  std::vector<EarconCue> cues;
  for (const auto& att : plan.earcons) {
    if (const auto* on_event = std::get_if<OnEvent>(&att.trigger)) {
      for (const auto& e : entries) {
        if (e.dropped) continue;
        const SoundSource* src = scene.find_source(e.source);
        if (src == nullptr || !matches(on_event->target, *src)) continue;
        cues.push_back(
            {att.earcon_clip, std::max(0.0, e.actual_onset - att.lead_time), e.source, e.event_id});
      }
    } else {
      const auto& prox = std::get<OnProximity>(att.trigger);
      for (const auto& src : scene.sources) {
        const auto* spatial = std::get_if<SpatialPlacement>(&src.placement);
        if (spatial == nullptr || spatial->listener_relative || !matches(prox.target, src)) continue;
        for (double t : proximity_entries(scene.listener, spatial->position, prox.radius))
          cues.push_back({att.earcon_clip, t, src.id, {}});
      }
    }
  }
  std::stable_sort(cues.begin(), cues.end(),
                   [](const EarconCue& a, const EarconCue& b) { return a.onset < b.onset; });
  return cues;
}

CompiledScene compile_directives(const Scene& scene, const ManipulationPlan& plan) {
  // (1) Time shift.
  std::vector<TimelineEntry> entries = timeline_entries(scene);
  if (plan.time_shift.enabled) {
    const auto spans = protected_intervals(scene, plan);
    entries = time_shift(std::move(entries), spans, plan.time_shift.guard_gap, scene.duration);
  } else {
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.actual_onset < b.actual_onset;
    });
  }

  // (6) is resolved early so sources that triggered an earcon can be tagged.
  const std::vector<EarconCue> cues = attach_earcons(plan, scene, entries);
  std::set<std::string> appended_sources;
  for (const auto& c : cues) appended_sources.insert(c.trigger_source);

  auto build = [&](const SoundEvent& ev, const SoundSource& src, double onset,
                   DirectiveKind kind) {
    RenderDirective d;
    d.kind = kind;
    d.event_id = ev.id;
    d.source = src.id;
    d.clip = src.clip;
    d.actual_onset = onset;
    d.duration = ev.duration;
    d.loop = ev.loop;

    // (2) Transparency applies to real-world sources only.
    const auto& tp = plan.transparency;
    if (src.category == SoundCategory::RealWorld) {
      d.gain = transparency_volume(tp, onset);
      const double cutoff = transparency_cutoff(tp, onset);
      if (cutoff > 0.0) d.filter_chain.emplace_back(dsp::design_highpass(cutoff));
      if (tp.tau_at(onset) < 1.0) d.tags.emplace_back(tag::kTransparency);
    } else {
      d.gain = tp.s_default;
    }
    // (3) Envelope.
    if (lookup_selector(plan.envelope_ranks, src) != nullptr) {
      d.gain *= envelope_gain(plan, src);
      d.tags.emplace_back(tag::kEnvelope);
    }
    // (4) Style.
    StyleChain style = style_chain(plan, src);
    if (!style.empty()) {
      d.filter_chain.insert(d.filter_chain.end(), style.filters.begin(), style.filters.end());
      d.pitch_ratio = style.pitch_ratio;
      d.tags.emplace_back(tag::kStyle);
    }
    // (5) Position.
    if (lookup_selector(plan.position_overrides, src) != nullptr) {
      d.placement = position_override(plan, src);
      d.tags.emplace_back(tag::kPosition);
    } else {
      d.placement = src.placement;
    }
    if (appended_sources.count(src.id)) d.tags.emplace_back(tag::kAppend);
    return d;
  };

  auto require_source = [&](const SoundEvent& ev) -> const SoundSource& {
    const SoundSource* src = scene.find_source(ev.source);
    if (src == nullptr)
      throw InvariantError("event.source_exists",
                           "event '" + ev.id + "' references missing source '" + ev.source + "'");
    return *src;
  };

  CompiledScene out;
  for (const auto& bed : scene.ambient_beds)
    out.directives.push_back(build(bed, require_source(bed), bed.scheduled_onset, DirectiveKind::Ambient));

  std::map<std::string, const TimelineEntry*> by_event;
  for (const auto& e : entries) by_event[e.event_id] = &e;
  std::map<std::string, std::size_t> directive_of_event;
  for (const auto& ev : scene.events) {
    const TimelineEntry& entry = *by_event.at(ev.id);
    RenderDirective d = build(ev, require_source(ev), entry.actual_onset, DirectiveKind::Event);
    if (entry.has_tag(tag::kTimeShift)) d.tags.emplace_back(tag::kTimeShift);
    d.dropped = entry.dropped;
    directive_of_event[ev.id] = out.directives.size();
    out.directives.push_back(std::move(d));
  }

  for (std::size_t i = 0; i < cues.size(); ++i) {
    const EarconCue& cue = cues[i];
    RenderDirective d;
    d.kind = DirectiveKind::Earcon;
    d.event_id = "earcon_" + std::to_string(i + 1);
    d.clip = cue.clip;
    d.actual_onset = cue.onset;
    d.gain = plan.transparency.s_default;
    d.placement = EarPlacement{Ear::Both};
    d.tags.emplace_back(tag::kAppend);
    out.directives.push_back(std::move(d));
  }
  // Event-triggered earcons are also listed on the event that fired them.
  for (const auto& cue : cues) {
    auto it = directive_of_event.find(cue.trigger_event);
    if (it != directive_of_event.end())
      out.directives[it->second].appended_earcons.emplace_back(cue.clip, cue.onset);
  }

  Timeline& tl = out.timeline;
  tl.scene_id = scene.id;
  tl.scenario = scene.scenario;
  tl.condition = plan.name;
  tl.duration = scene.duration;
  tl.earcons = cues;
  for (auto& e : entries) {
    const RenderDirective& d = out.directives[directive_of_event.at(e.event_id)];
    e.applied_manipulations = d.tags;
    e.gain = d.gain;
    tl.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace mrmix
