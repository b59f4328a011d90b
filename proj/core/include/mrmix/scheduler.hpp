#pragma once

// Seeded scene generation for the three study scenarios.
//
// RwFocused   street walk: keys 1 manhole tap, 2 drilling, 3 navigation,
//             4 ringtone; a cane tap every 0.5 s, and a manhole event swaps
//             the tap clip for the next four taps.
// VrFocused   help desk: keys 1 handbook sentence, 2 voice note, 3 knock,
//             4 public announcement.
// FullyMixed  hybrid conference: keys 1 RW speaker turn, 2 VR speaker turn,
//             3 dish clink, 4 virtual broadcast. Speaker turns come in RW/VR
//             pairs that overlap each other.

#include <cstdint>

#include "mrmix/scene.hpp"

namespace mrmix {

inline constexpr double kNominalScenarioDuration = 90.0;
/// Generation may lengthen a scene by up to this much before giving up.
inline constexpr double kMaxDurationExtension = 5.0;
/// Minimum silence between two events that share an identification key.
inline constexpr double kSameKeyGap = 1.0;
inline constexpr double kCaneTapPeriod = 0.5;
inline constexpr int kManholeTaps = 4;
/// Every speaker turn overlaps its partner by at least this share of its
/// own duration.
inline constexpr double kTurnOverlapQuota = 0.25;
inline constexpr double kWalkingSpeed = 1.0;  // m/s

struct ScenarioTemplate {
  ScenarioId id = ScenarioId::RwFocused;
  double duration = kNominalScenarioDuration;
};

/// Deterministic in (template, seed). Throws InfeasibleError naming the
/// constraint when packing fails even after extending the duration.
Scene generate_scenario(const ScenarioTemplate& tmpl, std::uint64_t seed);

inline Scene generate_scenario(ScenarioId id, std::uint64_t seed) {
  return generate_scenario(ScenarioTemplate{id, kNominalScenarioDuration}, seed);
}

}  // namespace mrmix
