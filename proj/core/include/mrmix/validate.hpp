#pragma once

#include <string>
#include <vector>

#include "mrmix/scene.hpp"

namespace mrmix {

/// One broken rule. `rule` is a stable dotted name such as
/// "event.source_exists"; `message` names the offending item.
struct Violation {
  std::string rule;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Identifiable-event count required per key for a scenario template
/// (index 0 is key 1).
std::vector<int> scenario_inventory(ScenarioId id);

std::vector<Violation> validate_scene(const Scene& scene);
std::vector<Violation> validate_plan(const ManipulationPlan& plan);
std::vector<Violation> validate_timeline(const Timeline& timeline);
std::vector<Violation> validate_clip(const AudioClip& clip);

}  // namespace mrmix
