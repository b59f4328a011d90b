#pragma once

// Built-in plans for the three listening conditions.

#include <optional>
#include <string_view>

#include "mrmix/scene.hpp"

namespace mrmix {

enum class Condition { FullTransparency, NoiseCancellation, Manipulated };

/// "ft", "nc", "ss".
std::string_view to_string(Condition c);
std::optional<Condition> condition_from_string(std::string_view s);

inline constexpr double kDrillingLowPass = 800.0;
inline constexpr double kConstructionRadius = 6.0;

/// FT and NC ignore the scene. SS needs `scene.scenario` and throws
/// InvariantError "plan.scenario_required" without it.
ManipulationPlan preset_plan(Condition condition, const Scene& scene);

/// SS plan for a scenario, with announcement-driven automation left empty.
ManipulationPlan manipulated_plan(ScenarioId scenario);

}  // namespace mrmix
