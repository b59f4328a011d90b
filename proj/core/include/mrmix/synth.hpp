#pragma once

// Procedural stand-ins for every stimulus, so scenes render without any
// recorded audio. All kinds are mono at kSampleRate, normalized to a 0.8 peak.
//
//   kind                   default  spectral signature
//   tap                    0.10 s   damped 2.6 kHz + 7.0 kHz partials, noise click
//   tap_on_manhole         0.50 s   tap pitched to 0.35x (910 Hz), 7x longer decay
//   drill                  2.00 s   110 Hz buzz, 20 harmonics, 25 Hz chatter, hiss
//   ringtone               2.00 s   1320/1650 Hz trill, 0.8 s on / 0.4 s off
//   speech_placeholder     3.00 s   300-3000 Hz noise, 4 Hz syllable envelope
//   knock                  0.60 s   three 190 Hz thuds, 0.16 s apart
//   dish_clink             1.00 s   3150/4720/6300 Hz inharmonic ring, two strikes
//   crowd_bed              2.00 s   six-voice babble below 1 kHz plus rumble
//   car_pass               2.00 s   noise below 250 Hz, 60 Hz hum, swell
//   sliding_door           1.20 s   800-2500 Hz friction noise, 80 Hz end thud
//   earcon_a               0.40 s   rising chime 880 -> 1320 Hz
//   earcon_b               0.40 s   falling chime 1320 -> 880 Hz
//   broadcast_placeholder  2.00 s   660/830 Hz chime, then 500-2500 Hz babble

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mrmix/scene.hpp"

namespace mrmix {

enum class ClipKind {
  Tap,
  TapOnManhole,
  Drill,
  Ringtone,
  SpeechPlaceholder,
  Knock,
  DishClink,
  CrowdBed,
  CarPass,
  SlidingDoor,
  EarconA,
  EarconB,
  BroadcastPlaceholder,
};

inline constexpr std::array<ClipKind, 13> kAllClipKinds = {
    ClipKind::Tap,         ClipKind::TapOnManhole, ClipKind::Drill,
    ClipKind::Ringtone,    ClipKind::SpeechPlaceholder, ClipKind::Knock,
    ClipKind::DishClink,   ClipKind::CrowdBed,     ClipKind::CarPass,
    ClipKind::SlidingDoor, ClipKind::EarconA,      ClipKind::EarconB,
    ClipKind::BroadcastPlaceholder,
};

inline constexpr float kSynthPeak = 0.8f;

struct ClipSpec {
  ClipKind kind = ClipKind::Tap;
  double duration = 0.1;
  std::uint64_t seed = 0;
};

/// Clip id used in scenes, e.g. "tap_on_manhole".
std::string_view clip_id(ClipKind kind);
std::optional<ClipKind> clip_kind_from_id(std::string_view id);
double default_duration(ClipKind kind);

/// Pure function of `spec`. Throws InvariantError if duration <= 0.
AudioClip synthesize(const ClipSpec& spec);

using ClipBank = std::map<std::string, AudioClip>;

/// One clip per kind at its default duration, keyed by clip id.
ClipBank default_clip_bank(std::uint64_t seed);

}  // namespace mrmix
