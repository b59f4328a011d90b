#include "mrmix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mrmix/dsp.hpp"
#include "mrmix/errors.hpp"
#include "mrmix/rng.hpp"

namespace mrmix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDt = 1.0 / kSampleRate;

using Signal = std::vector<double>;

double noise(Rng& rng) { return rng.uniform(-1.0, 1.0); }

void add_damped_sine(Signal& s, double start, double freq, double amp, double decay,
                     double phase = 0.0) {
  const auto first = static_cast<std::size_t>(std::max<std::int64_t>(0, to_samples(start)));
  for (std::size_t i = first; i < s.size(); ++i) {
    const double t = static_cast<double>(i - first) * kDt;
    const double env = std::exp(-t / decay);
    if (env < 1e-6) break;
    s[i] += amp * env * std::sin(kTwoPi * freq * t + phase);
  }
}

void add_click(Signal& s, double start, double amp, double decay, Rng& rng) {
  const auto first = static_cast<std::size_t>(std::max<std::int64_t>(0, to_samples(start)));
  for (std::size_t i = first; i < s.size(); ++i) {
    const double t = static_cast<double>(i - first) * kDt;
    const double env = std::exp(-t / decay);
    if (env < 1e-6) break;
    s[i] += amp * env * noise(rng);
  }
}

Signal band_noise(std::size_t n, double low, double high, Rng& rng) {
  Signal s(n);
  for (auto& v : s) v = noise(rng);
  if (low > 0.0) dsp::apply_filter_in_place(s, dsp::design_highpass(low));
  if (high > 0.0) dsp::apply_filter_in_place(s, dsp::design_lowpass(high));
  return s;
}

/// Raised-cosine syllable envelope with per-syllable random level.
Signal syllable_envelope(std::size_t n, double rate, Rng& rng) {
  Signal env(n);
  const double phase = rng.uniform(0.0, 1.0);
  std::vector<double> levels;
  for (std::size_t i = 0; i < n; ++i) {
    const double cycles = static_cast<double>(i) * kDt * rate + phase;
    const auto syllable = static_cast<std::size_t>(cycles);
    while (levels.size() <= syllable) levels.push_back(rng.uniform(0.45, 1.0));
    const double shape = 0.5 - 0.5 * std::cos(kTwoPi * cycles);
    env[i] = levels[syllable] * std::pow(shape, 1.5);
  }
  return env;
}

void fade_edges(Signal& s, double seconds) {
  const std::size_t ramp = std::min(s.size() / 2, static_cast<std::size_t>(to_samples(seconds)));
  for (std::size_t i = 0; i < ramp; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(ramp);
    s[i] *= g;
    s[s.size() - 1 - i] *= g;
  }
}

void tap_body(Signal& s, double freq, double decay, Rng& rng) {
  const double jitter = rng.uniform(0.97, 1.03);
  add_damped_sine(s, 0.0, freq * jitter, 0.8, decay, rng.uniform(0.0, kTwoPi));
  add_damped_sine(s, 0.0, 2.7 * freq * jitter, 0.35, decay * 0.6, rng.uniform(0.0, kTwoPi));
  add_click(s, 0.0, 0.5, 0.0006, rng);
}

Signal tap(std::size_t n, Rng& rng) {
  Signal s(n);
  tap_body(s, 2600.0, 0.008, rng);
  return s;
}

// Same strike as `tap`, pitched down and with a longer hollow ring.
Signal tap_on_manhole(std::size_t n, Rng& rng) {
  Signal s(n);
  tap_body(s, 2600.0 * 0.35, 0.008 * 7.0, rng);
  add_damped_sine(s, 0.0, 2600.0 * 0.35 * 1.5, 0.3, 0.04, rng.uniform(0.0, kTwoPi));
  return s;
}

Signal drill(std::size_t n, Rng& rng) {
  Signal s(n);
  const double f0 = 110.0 * rng.uniform(0.98, 1.02);
  const double chatter_phase = rng.uniform(0.0, kTwoPi);
  for (int k = 1; k <= 20; ++k) {
    const double phase = rng.uniform(0.0, kTwoPi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * kDt;
      s[i] += std::sin(kTwoPi * f0 * k * t + phase) / k;
    }
  }
  const Signal hiss = band_noise(n, 2000.0, 0.0, rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * kDt;
    const double chatter = 0.6 + 0.4 * std::sin(kTwoPi * 25.0 * t + chatter_phase);
    s[i] = chatter * s[i] + 0.6 * hiss[i];
  }
  fade_edges(s, 0.01);
  return s;
}

Signal ringtone(std::size_t n, Rng& rng) {
  Signal s(n);
  const double detune = rng.uniform(0.995, 1.005);
  double phase = rng.uniform(0.0, kTwoPi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * kDt;
    const double cycle = std::fmod(t, 1.2);
    const bool on = cycle < 0.8;
    const double f = (static_cast<int>(t / 0.05) % 2 == 0 ? 1320.0 : 1650.0) * detune;
    phase += kTwoPi * f * kDt;
    if (on) {
      const double edge = std::min({1.0, cycle / 0.005, (0.8 - cycle) / 0.005});
      s[i] = edge * (std::sin(phase) + 0.2 * std::sin(2.0 * phase));
    }
  }
  return s;
}

Signal speech(std::size_t n, Rng& rng, double low, double high, double rate) {
  Signal s = band_noise(n, low, high, rng);
  const Signal env = syllable_envelope(n, rate, rng);
  for (std::size_t i = 0; i < n; ++i) s[i] *= env[i];
  fade_edges(s, 0.01);
  return s;
}

Signal knock(std::size_t n, Rng& rng) {
  Signal s(n);
  for (int k = 0; k < 3; ++k) {
    const double at = 0.16 * k + rng.uniform(0.0, 0.01);
    const double amp = rng.uniform(0.8, 1.0);
    add_damped_sine(s, at, 190.0, amp, 0.025, rng.uniform(0.0, kTwoPi));
    add_damped_sine(s, at, 380.0, 0.4 * amp, 0.012, rng.uniform(0.0, kTwoPi));
    add_click(s, at, 0.15 * amp, 0.001, rng);
  }
  return s;
}

Signal dish_clink(std::size_t n, Rng& rng) {
  Signal s(n);
  for (double at : {0.0, 0.35}) {
    const double amp = rng.uniform(0.7, 1.0);
    add_damped_sine(s, at, 3150.0, amp, 0.12, rng.uniform(0.0, kTwoPi));
    add_damped_sine(s, at, 4720.0, 0.7 * amp, 0.09, rng.uniform(0.0, kTwoPi));
    add_damped_sine(s, at, 6300.0, 0.5 * amp, 0.06, rng.uniform(0.0, kTwoPi));
  }
  return s;
}

Signal crowd_bed(std::size_t n, Rng& rng) {
  Signal s(n);
  for (int voice = 0; voice < 6; ++voice) {
    const Signal v = speech(n, rng, 200.0, 1000.0, rng.uniform(3.0, 5.0));
    for (std::size_t i = 0; i < n; ++i) s[i] += v[i];
  }
  const Signal rumble = band_noise(n, 0.0, 400.0, rng);
  for (std::size_t i = 0; i < n; ++i) s[i] += 0.5 * rumble[i];
  fade_edges(s, 0.02);
  return s;
}

Signal car_pass(std::size_t n, Rng& rng) {
  Signal s = band_noise(n, 0.0, 250.0, rng);
  dsp::apply_filter_in_place(s, dsp::design_lowpass(250.0));
  const double hum_phase = rng.uniform(0.0, kTwoPi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * kDt;
    const double u = static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n - 1, 1));
    const double swell = std::pow(std::sin(std::numbers::pi * u), 2.0);
    const double hum = 0.15 * (std::sin(kTwoPi * 60.0 * t + hum_phase) +
                               0.5 * std::sin(kTwoPi * 120.0 * t + hum_phase));
    s[i] = swell * (4.0 * s[i] + hum);
  }
  return s;
}

Signal sliding_door(std::size_t n, Rng& rng) {
  Signal s = band_noise(n, 800.0, 2500.0, rng);
  const double slide_end = static_cast<double>(n) * kDt * (1.0 / 1.2);
  const double rough_phase = rng.uniform(0.0, kTwoPi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * kDt;
    const double rough = 0.55 + 0.45 * std::sin(kTwoPi * 30.0 * t + rough_phase);
    s[i] *= t < slide_end ? rough : 0.0;
  }
  fade_edges(s, 0.02);
  add_damped_sine(s, slide_end, 80.0, 1.2, 0.05, rng.uniform(0.0, kTwoPi));
  return s;
}

Signal chime(std::size_t n, double first, double second, Rng& rng) {
  Signal s(n);
  const double half = static_cast<double>(n) * kDt / 2.0;
  const double detune = rng.uniform(0.998, 1.002);
  int k = 0;
  for (double f : {first, second}) {
    const double at = half * k++;
    const auto start = static_cast<std::size_t>(to_samples(at));
    const auto stop = std::min(n, static_cast<std::size_t>(to_samples(at + half)));
    for (std::size_t i = start; i < stop; ++i) {
      const double t = static_cast<double>(i - start) * kDt;
      const double attack = std::min(1.0, t / 0.01);
      const double release = std::min(1.0, (static_cast<double>(stop - i)) * kDt / 0.01);
      const double env = attack * release * std::exp(-t / 0.12);
      const double w = kTwoPi * f * detune * t;
      s[i] = env * (std::sin(w) + 0.3 * std::sin(2.0 * w));
    }
  }
  return s;
}

Signal broadcast(std::size_t n, Rng& rng) {
  Signal s(n);
  const std::size_t chime_len = std::min(n, static_cast<std::size_t>(to_samples(0.5)));
  const Signal bell = chime(chime_len, 660.0, 830.0, rng);
  std::copy(bell.begin(), bell.end(), s.begin());
  const std::size_t talk_start = std::min(n, static_cast<std::size_t>(to_samples(0.6)));
  if (talk_start < n) {
    const Signal talk = speech(n - talk_start, rng, 500.0, 2500.0, 5.0);
    for (std::size_t i = 0; i < talk.size(); ++i) s[talk_start + i] += 1.3 * talk[i];
  }
  return s;
}

Signal render_kind(ClipKind kind, std::size_t n, Rng& rng) {
  switch (kind) {
    case ClipKind::Tap: return tap(n, rng);
    case ClipKind::TapOnManhole: return tap_on_manhole(n, rng);
    case ClipKind::Drill: return drill(n, rng);
    case ClipKind::Ringtone: return ringtone(n, rng);
    case ClipKind::SpeechPlaceholder: return speech(n, rng, 300.0, 3000.0, 4.0);
    case ClipKind::Knock: return knock(n, rng);
    case ClipKind::DishClink: return dish_clink(n, rng);
    case ClipKind::CrowdBed: return crowd_bed(n, rng);
    case ClipKind::CarPass: return car_pass(n, rng);
    case ClipKind::SlidingDoor: return sliding_door(n, rng);
    case ClipKind::EarconA: return chime(n, 880.0, 1320.0, rng);
    case ClipKind::EarconB: return chime(n, 1320.0, 880.0, rng);
    case ClipKind::BroadcastPlaceholder: return broadcast(n, rng);
  }
  return Signal(n);
}

}  // namespace

std::string_view clip_id(ClipKind kind) {
  switch (kind) {
    case ClipKind::Tap: return "tap";
    case ClipKind::TapOnManhole: return "tap_on_manhole";
    case ClipKind::Drill: return "drill";
    case ClipKind::Ringtone: return "ringtone";
    case ClipKind::SpeechPlaceholder: return "speech_placeholder";
    case ClipKind::Knock: return "knock";
    case ClipKind::DishClink: return "dish_clink";
    case ClipKind::CrowdBed: return "crowd_bed";
    case ClipKind::CarPass: return "car_pass";
    case ClipKind::SlidingDoor: return "sliding_door";
    case ClipKind::EarconA: return "earcon_a";
    case ClipKind::EarconB: return "earcon_b";
    case ClipKind::BroadcastPlaceholder: return "broadcast_placeholder";
  }
  return "tap";
}

std::optional<ClipKind> clip_kind_from_id(std::string_view id) {
  for (ClipKind k : kAllClipKinds)
    if (clip_id(k) == id) return k;
  return std::nullopt;
}

double default_duration(ClipKind kind) {
  switch (kind) {
    case ClipKind::Tap: return 0.1;
    case ClipKind::TapOnManhole: return 0.5;
    case ClipKind::Drill: return 2.0;
    case ClipKind::Ringtone: return 2.0;
    case ClipKind::SpeechPlaceholder: return 3.0;
    case ClipKind::Knock: return 0.6;
    case ClipKind::DishClink: return 1.0;
    case ClipKind::CrowdBed: return 2.0;
    case ClipKind::CarPass: return 2.0;
    case ClipKind::SlidingDoor: return 1.2;
    case ClipKind::EarconA: return 0.4;
    case ClipKind::EarconB: return 0.4;
    case ClipKind::BroadcastPlaceholder: return 2.0;
  }
  return 1.0;
}

AudioClip synthesize(const ClipSpec& spec) {
  if (!(spec.duration > 0.0) || !std::isfinite(spec.duration))
    throw InvariantError("clip_spec.duration_positive", "clip duration must be > 0");
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(1, to_samples(spec.duration)));
  Rng rng(mix_seed(spec.seed, hash_name(clip_id(spec.kind))));
  Signal s = render_kind(spec.kind, n, rng);

  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0.0 ? kSynthPeak / peak : 0.0;

  AudioClip clip;
  clip.id = std::string(clip_id(spec.kind));
  clip.channels = 1;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) clip.samples[i] = static_cast<float>(s[i] * scale);
  return clip;
}

ClipBank default_clip_bank(std::uint64_t seed) {
  ClipBank bank;
  for (ClipKind k : kAllClipKinds) {
    AudioClip clip = synthesize({k, default_duration(k), seed});
    bank.emplace(clip.id, std::move(clip));
  }
  return bank;
}

}  // namespace mrmix
