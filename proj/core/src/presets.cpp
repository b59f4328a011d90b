#include "mrmix/presets.hpp"

#include <algorithm>

#include "mrmix/errors.hpp"

namespace mrmix {

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::FullTransparency: return "ft";
    case Condition::NoiseCancellation: return "nc";
    case Condition::Manipulated: return "ss";
  }
  return "ft";
}

std::optional<Condition> condition_from_string(std::string_view s) {
  if (s == "ft") return Condition::FullTransparency;
  if (s == "nc") return Condition::NoiseCancellation;
  if (s == "ss") return Condition::Manipulated;
  return std::nullopt;
}

namespace {

ManipulationPlan rw_focused() {
  ManipulationPlan p;
  p.transparency.tau = 0.5;
  p.envelope_ranks = {{"manhole", 1}, {"drilling", 2}, {"navigation", 3}, {"ringtone", 4}};
  p.position_overrides = {{"navigation", EarPlacement{Ear::Left}},
                          {"ringtone", EarPlacement{Ear::Right}}};
  p.style_filters = {{"drilling", LowPass{kDrillingLowPass}}};
  p.time_shift = {true, 0.0, {"protected"}};
  p.earcons = {{"earcon_a", OnProximity{"drilling", kConstructionRadius}, 0.4}};
  return p;
}

ManipulationPlan vr_focused() {
  ManipulationPlan p;
  p.transparency.tau = 0.0;
  p.envelope_ranks = {{"knock", 1}, {"announcement", 2}, {"handbook", 3}, {"voice_note", 4}};
  p.position_overrides = {{"handbook", EarPlacement{Ear::Left}},
                          {"voice_note", EarPlacement{Ear::Right}}};
  p.time_shift = {true, 0.0, {"protected"}};
  return p;
}

ManipulationPlan fully_mixed() {
  ManipulationPlan p;
  p.transparency.tau = 0.5;
  // Both voice groups share the top rank.
  p.envelope_ranks = {{"rw_voice", 1}, {"vr_voice", 1}, {"dish", 2}, {"broadcast", 3}};
  p.position_overrides = {{"broadcast", EarPlacement{Ear::Right}}};
  p.style_filters = {{"vr_voice", Telephone{300.0, 3400.0}}};
  p.time_shift = {true, 0.0, {"protected"}};
  p.earcons = {{"earcon_a", OnEvent{"dish"}, 0.4}, {"earcon_b", OnEvent{"broadcast"}, 0.4}};
  return p;
}

}  // namespace

ManipulationPlan manipulated_plan(ScenarioId scenario) {
  ManipulationPlan p;
  switch (scenario) {
    case ScenarioId::RwFocused: p = rw_focused(); break;
    case ScenarioId::VrFocused: p = vr_focused(); break;
    case ScenarioId::FullyMixed: p = fully_mixed(); break;
  }
  p.name = std::string("ss_") + std::string(to_string(scenario));
  return p;
}

ManipulationPlan preset_plan(Condition condition, const Scene& scene) {
  ManipulationPlan p;
  switch (condition) {
    case Condition::FullTransparency:
      p.name = "ft";
      p.transparency.tau = 1.0;
      return p;
    case Condition::NoiseCancellation:
      p.name = "nc";
      p.transparency.tau = 0.0;
      return p;
    case Condition::Manipulated:
      break;
  }
  if (!scene.scenario)
    throw InvariantError("plan.scenario_required",
                         "the ss condition needs a scene generated from a scenario template");
  p = manipulated_plan(*scene.scenario);
  if (*scene.scenario == ScenarioId::VrFocused) {
    // Open up to half transparency while each announcement plays.
    std::vector<SoundEvent> anns;
    for (const auto& ev : scene.events) {
      const SoundSource* src = scene.find_source(ev.source);
      if (src != nullptr && src->group == "announcement") anns.push_back(ev);
    }
    std::sort(anns.begin(), anns.end(),
              [](const auto& a, const auto& b) { return a.scheduled_onset < b.scheduled_onset; });
    for (const auto& ev : anns) {
      p.transparency.tau_automation.push_back({ev.scheduled_onset, 0.5});
      p.transparency.tau_automation.push_back({ev.end(), 0.0});
    }
  }
  return p;
}

}  // namespace mrmix
