#include "mrmix/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "mrmix/errors.hpp"
#include "mrmix/rng.hpp"
#include "mrmix/synth.hpp"

namespace mrmix {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kInstancesPerKey = 5;
constexpr int kSpeakerPairs = 6;
constexpr double kBedSegment = 15.0;
constexpr int kAttemptsPerSpan = 400;

/// Times on disk are kept on a 1 ms grid.
double ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

struct Span {
  double onset = 0.0;
  double duration = 0.0;
  double end() const { return onset + duration; }
};

struct PackFailure {
  std::string constraint;
};

bool separated(const Span& a, const Span& b, double gap) {
  return b.onset >= a.end() + gap || a.onset >= b.end() + gap;
}

using SpanDraw = std::function<Span(Rng&, std::size_t index)>;

/// Rejection-sample `count` spans that keep `gap` seconds between each other.
/// `draw` receives the index of the span being placed; the result is in
/// index order.
std::vector<Span> pack_indexed(Rng& rng, int count, double gap, const SpanDraw& draw,
                               const std::string& constraint) {
  std::vector<Span> accepted;
  int attempts = 0;
  while (static_cast<int>(accepted.size()) < count) {
    if (++attempts > kAttemptsPerSpan * count) throw PackFailure{constraint};
    const Span s = draw(rng, accepted.size());
    if (std::all_of(accepted.begin(), accepted.end(),
                    [&](const Span& o) { return separated(o, s, gap); }))
      accepted.push_back(s);
  }
  return accepted;
}

/// Same as pack_indexed for interchangeable spans, sorted by onset.
std::vector<Span> pack(Rng& rng, int count, double gap, const std::function<Span(Rng&)>& draw,
                       const std::string& constraint) {
  auto spans = pack_indexed(rng, count, gap, [&](Rng& r, std::size_t) { return draw(r); },
                            constraint);
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.onset < b.onset; });
  return spans;
}

std::vector<Span> pack(Rng&& rng, int count, double gap, const std::function<Span(Rng&)>& draw,
                       const std::string& constraint) {
  return pack(rng, count, gap, draw, constraint);
}

/// Span of random length with an onset drawn so it fits in [lead, horizon - lead].
std::function<Span(Rng&)> uniform_span(double min_dur, double max_dur, double horizon,
                                       const std::string& constraint, double lead = 1.0) {
  return [=](Rng& rng) {
    const double dur = ms(rng.uniform(min_dur, max_dur));
    const double latest = horizon - dur - lead;
    if (latest <= lead) throw PackFailure{constraint};
    return Span{ms(rng.uniform(lead, latest)), dur};
  };
}

Vec3 around(Rng& rng, double min_r, double max_r, double y = 0.0) {
  const double r = rng.uniform(min_r, max_r);
  const double a = rng.uniform(-kPi, kPi);
  return {ms(r * std::sin(a)), y, ms(r * std::cos(a))};
}

class SceneBuilder {
 public:
  SceneBuilder(ScenarioId id, double duration, std::uint64_t seed) {
    scene_.id = std::string(to_string(id)) + "-" + std::to_string(seed);
    scene_.scenario = id;
    scene_.duration = duration;
    scene_.seed = seed;
  }

  void source(std::string id, ClipKind clip, std::string group, SoundCategory cat,
              Placement placement, std::optional<int> key = std::nullopt, bool prot = false) {
    scene_.sources.push_back({std::move(id), std::string(clip_id(clip)), std::move(group), cat,
                              placement, key, prot});
  }

  void event(std::string id, std::string source, const Span& s, bool loop = false) {
    scene_.events.push_back({std::move(id), std::move(source), s.onset, s.duration, loop});
  }

  void bed(std::string id, std::string source, const Span& s, bool loop = false) {
    scene_.ambient_beds.push_back({std::move(id), std::move(source), s.onset, s.duration, loop});
  }

  void static_listener() { scene_.listener.waypoints = {{0.0, {}, 0.0}}; }
  void listener(std::vector<Waypoint> waypoints) { scene_.listener.waypoints = std::move(waypoints); }

  double duration() const { return scene_.duration; }

  /// Crowd loops covering the whole scene in fixed segments.
  void crowd_segments(Rng& rng, const std::function<Vec3(Rng&, double mid)>& where) {
    int k = 0;
    for (double start = 0.0; start < duration(); start += kBedSegment) {
      const Span seg{start, ms(std::min(kBedSegment, duration() - start))};
      const std::string id = "crowd_" + std::to_string(++k);
      source(id, ClipKind::CrowdBed, "crowd", SoundCategory::RealWorld,
             SpatialPlacement{where(rng, seg.onset + seg.duration / 2.0)});
      bed(id, id, seg, true);
    }
  }

  Scene finish() {
    auto by_onset = [](const SoundEvent& a, const SoundEvent& b) {
      return a.scheduled_onset < b.scheduled_onset ||
             (a.scheduled_onset == b.scheduled_onset && a.id < b.id);
    };
    std::stable_sort(scene_.events.begin(), scene_.events.end(), by_onset);
    std::stable_sort(scene_.ambient_beds.begin(), scene_.ambient_beds.end(), by_onset);
    return std::move(scene_);
  }

 private:
  Scene scene_;
};

std::string numbered(const std::string& stem, std::size_t i) { return stem + "_" + std::to_string(i + 1); }

Scene build_rw_focused(double d, std::uint64_t seed, Rng& rng) {
  SceneBuilder b(ScenarioId::RwFocused, d, seed);
  const double speed = kWalkingSpeed;
  b.listener({{0.0, {0.0, 0.0, 0.0}, 0.0}, {d, {0.0, 0.0, ms(speed * d)}, 0.0}});

  const SpatialPlacement cane_tip{{0.0, -1.0, 0.8}, true};
  b.source("cane", ClipKind::Tap, "cane", SoundCategory::RealWorld, cane_tip);
  b.source("manhole", ClipKind::TapOnManhole, "manhole", SoundCategory::RealWorld, cane_tip, 1,
           true);
  b.source("navigation", ClipKind::SpeechPlaceholder, "navigation", SoundCategory::Virtual,
           EarPlacement{Ear::Both}, 3);
  b.source("ringtone", ClipKind::Ringtone, "ringtone", SoundCategory::Virtual,
           EarPlacement{Ear::Both}, 4);

  // Manhole contact: four consecutive cane slots switch to the hollow tap.
  const double manhole_len = kManholeTaps * kCaneTapPeriod;
  const auto last_slot = static_cast<int>(std::floor((d - manhole_len) / kCaneTapPeriod));
  if (last_slot < 2) throw PackFailure{"manhole.fits_duration"};
  const auto manholes = pack(rng.fork("manhole"), kInstancesPerKey, kSameKeyGap,
                             [&](Rng& r) {
                               const auto slot = 2 + static_cast<int>(r.below(last_slot - 1));
                               return Span{slot * kCaneTapPeriod, manhole_len};
                             },
                             "manhole.same_key_gap");
  std::set<long> manhole_slots;
  for (std::size_t i = 0; i < manholes.size(); ++i) {
    b.event(numbered("manhole", i), "manhole", manholes[i], true);
    const long first = std::lround(manholes[i].onset / kCaneTapPeriod);
    for (int t = 0; t < kManholeTaps; ++t) manhole_slots.insert(first + t);
  }
  const double tap_len = default_duration(ClipKind::Tap);
  for (long slot = 0; slot * kCaneTapPeriod + tap_len <= d; ++slot) {
    if (manhole_slots.count(slot)) continue;
    b.bed("cane_" + std::to_string(slot), "cane", {slot * kCaneTapPeriod, tap_len});
  }

  // Construction sites sit a few meters ahead on the right of where the
  // listener is when the drill starts.
  Rng drill_rng = rng.fork("drilling");
  const auto drills =
      pack(drill_rng, kInstancesPerKey, kSameKeyGap, uniform_span(2.0, 3.0, d, "drilling.fits_duration"),
           "drilling.same_key_gap");
  for (std::size_t i = 0; i < drills.size(); ++i) {
    const std::string id = numbered("drilling", i);
    const Vec3 site{ms(drill_rng.uniform(1.5, 3.0)), 0.0,
                    ms(speed * drills[i].onset + drill_rng.uniform(1.0, 4.0))};
    b.source(id, ClipKind::Drill, "drilling", SoundCategory::RealWorld, SpatialPlacement{site}, 2,
             true);
    b.event(id, id, drills[i], true);
  }

  const auto navs = pack(rng.fork("navigation"), kInstancesPerKey, kSameKeyGap,
                         uniform_span(2.0, 3.0, d, "navigation.fits_duration"),
                         "navigation.same_key_gap");
  for (std::size_t i = 0; i < navs.size(); ++i) b.event(numbered("navigation", i), "navigation", navs[i]);

  const double ring_len = default_duration(ClipKind::Ringtone);
  const auto rings = pack(rng.fork("ringtone"), kInstancesPerKey, kSameKeyGap,
                          uniform_span(ring_len, ring_len, d, "ringtone.fits_duration"),
                          "ringtone.same_key_gap");
  for (std::size_t i = 0; i < rings.size(); ++i) b.event(numbered("ringtone", i), "ringtone", rings[i]);

  // Cars pass on the listener's left.
  Rng car_rng = rng.fork("cars");
  const auto cars = pack(car_rng, 6, 0.5, uniform_span(2.0, 2.0, d, "car.fits_duration", 0.0),
                         "car.gap");
  for (std::size_t i = 0; i < cars.size(); ++i) {
    const std::string id = numbered("car", i);
    const Vec3 pos{ms(car_rng.uniform(-7.0, -4.0)), 0.0,
                   ms(speed * cars[i].onset + car_rng.uniform(-3.0, 3.0))};
    b.source(id, ClipKind::CarPass, "car", SoundCategory::RealWorld, SpatialPlacement{pos});
    b.bed(id, id, cars[i]);
  }

  Rng crowd_rng = rng.fork("crowd");
  b.crowd_segments(crowd_rng, [&](Rng& r, double mid) {
    const double side = r.below(2) == 0 ? -1.0 : 1.0;
    return Vec3{ms(side * r.uniform(2.0, 5.0)), 0.0, ms(speed * mid + r.uniform(-4.0, 8.0))};
  });

  return b.finish();
}

Scene build_vr_focused(double d, std::uint64_t seed, Rng& rng) {
  SceneBuilder b(ScenarioId::VrFocused, d, seed);
  b.static_listener();
  b.source("handbook", ClipKind::SpeechPlaceholder, "handbook", SoundCategory::Virtual,
           EarPlacement{Ear::Both}, 1);
  b.source("voice_note", ClipKind::SpeechPlaceholder, "voice_note", SoundCategory::Virtual,
           EarPlacement{Ear::Both}, 2);
  b.source("announcement", ClipKind::BroadcastPlaceholder, "announcement",
           SoundCategory::RealWorld, SpatialPlacement{{0.0, 2.5, 8.0}}, 4, true);

  // The same-key gap doubles as the pause between handbook sentences.
  const auto sentences = pack(rng.fork("handbook"), kInstancesPerKey, kSameKeyGap,
                              uniform_span(3.0, 5.0, d, "handbook.fits_duration"),
                              "handbook.sentence_pause");
  for (std::size_t i = 0; i < sentences.size(); ++i)
    b.event(numbered("handbook", i), "handbook", sentences[i], true);

  const auto notes = pack(rng.fork("voice_note"), kInstancesPerKey, kSameKeyGap,
                          uniform_span(2.0, 3.0, d, "voice_note.fits_duration"),
                          "voice_note.same_key_gap");
  for (std::size_t i = 0; i < notes.size(); ++i) b.event(numbered("voice_note", i), "voice_note", notes[i]);

  Rng knock_rng = rng.fork("knock");
  const double knock_len = default_duration(ClipKind::Knock);
  const auto knocks = pack(knock_rng, kInstancesPerKey, kSameKeyGap,
                           uniform_span(knock_len, knock_len, d, "knock.fits_duration"),
                           "knock.same_key_gap");
  for (std::size_t i = 0; i < knocks.size(); ++i) {
    const std::string id = numbered("knock", i);
    const Vec3 pos{ms(knock_rng.uniform(-0.6, 0.6)), -0.2, ms(knock_rng.uniform(0.6, 1.0))};
    b.source(id, ClipKind::Knock, "knock", SoundCategory::RealWorld, SpatialPlacement{pos}, 3, true);
    b.event(id, id, knocks[i]);
  }

  const double ann_len = default_duration(ClipKind::BroadcastPlaceholder);
  const auto anns = pack(rng.fork("announcement"), kInstancesPerKey, kSameKeyGap,
                         uniform_span(ann_len, ann_len, d, "announcement.fits_duration"),
                         "announcement.same_key_gap");
  for (std::size_t i = 0; i < anns.size(); ++i)
    b.event(numbered("announcement", i), "announcement", anns[i]);

  b.source("door", ClipKind::SlidingDoor, "door", SoundCategory::RealWorld,
           SpatialPlacement{{-5.0, 0.0, 6.0}});
  const double door_len = default_duration(ClipKind::SlidingDoor);
  const auto doors = pack(rng.fork("door"), 5, 2.0,
                          uniform_span(door_len, door_len, d, "door.fits_duration", 0.0), "door.gap");
  for (std::size_t i = 0; i < doors.size(); ++i) b.bed(numbered("door", i), "door", doors[i]);

  Rng crowd_rng = rng.fork("crowd");
  b.crowd_segments(crowd_rng, [](Rng& r, double) { return around(r, 3.0, 8.0); });
  return b.finish();
}

Scene build_fully_mixed(double d, std::uint64_t seed, Rng& rng) {
  SceneBuilder b(ScenarioId::FullyMixed, d, seed);
  b.static_listener();

  // Each block is one RW turn and one VR turn, the second starting before
  // the first ends so both overlap by at least the quota.
  struct Pair {
    double rw_dur, vr_dur, overlap;
    bool rw_first;
    double span() const {
      const double first = rw_first ? rw_dur : vr_dur;
      const double second = rw_first ? vr_dur : rw_dur;
      return std::max(first, first - overlap + second);
    }
  };
  Rng pair_rng = rng.fork("speakers");
  std::vector<Pair> pairs;
  for (int i = 0; i < kSpeakerPairs; ++i) {
    Pair p{ms(pair_rng.uniform(2.5, 4.0)), ms(pair_rng.uniform(2.5, 4.0)), 0.0,
           pair_rng.below(2) == 0};
    p.overlap = ms(pair_rng.uniform(0.3, 0.5) * std::max(p.rw_dur, p.vr_dur));
    pairs.push_back(p);
  }
  const auto blocks = pack_indexed(pair_rng, kSpeakerPairs, kSameKeyGap,
                                   [&](Rng& r, std::size_t i) {
                                     const double span = pairs[i].span();
                                     const double latest = d - span - 1.0;
                                     if (latest <= 1.0) throw PackFailure{"speaker.fits_duration"};
                                     return Span{ms(r.uniform(1.0, latest)), span};
                                   },
                                   "speaker.same_key_gap");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Pair& p = pairs[i];
    const double first_dur = p.rw_first ? p.rw_dur : p.vr_dur;
    const double second_dur = p.rw_first ? p.vr_dur : p.rw_dur;
    const Span first{blocks[i].onset, first_dur};
    const Span second{ms(blocks[i].onset + first_dur - p.overlap), second_dur};
    const Span& rw = p.rw_first ? first : second;
    const Span& vr = p.rw_first ? second : first;

    const bool on_stage = i < kSpeakerPairs / 2;
    auto seat = [&](Rng& r) {
      return on_stage ? Vec3{ms(r.uniform(-3.0, 3.0)), 0.3, ms(r.uniform(6.0, 8.0))}
                      : around(r, 1.2, 1.8);
    };
    const std::string rw_id = numbered("rw_speaker", i);
    const std::string vr_id = numbered("vr_speaker", i);
    b.source(rw_id, ClipKind::SpeechPlaceholder, "rw_voice", SoundCategory::RealWorld,
             SpatialPlacement{seat(pair_rng)}, 1, true);
    b.source(vr_id, ClipKind::SpeechPlaceholder, "vr_voice", SoundCategory::Virtual,
             SpatialPlacement{seat(pair_rng)}, 2);
    b.event(rw_id, rw_id, rw, true);
    b.event(vr_id, vr_id, vr, true);
  }

  Rng dish_rng = rng.fork("dish");
  const double dish_len = default_duration(ClipKind::DishClink);
  const auto dishes = pack(dish_rng, kInstancesPerKey, kSameKeyGap,
                           uniform_span(dish_len, dish_len, d, "dish.fits_duration"),
                           "dish.same_key_gap");
  for (std::size_t i = 0; i < dishes.size(); ++i) {
    const std::string id = numbered("dish", i);
    b.source(id, ClipKind::DishClink, "dish", SoundCategory::RealWorld,
             SpatialPlacement{around(dish_rng, 0.5, 1.0, -0.3)}, 3, true);
    b.event(id, id, dishes[i]);
  }

  b.source("broadcast", ClipKind::BroadcastPlaceholder, "broadcast", SoundCategory::Virtual,
           EarPlacement{Ear::Both}, 4);
  const double cast_len = default_duration(ClipKind::BroadcastPlaceholder);
  const auto casts = pack(rng.fork("broadcast"), kInstancesPerKey, kSameKeyGap,
                          uniform_span(cast_len, cast_len, d, "broadcast.fits_duration"),
                          "broadcast.same_key_gap");
  for (std::size_t i = 0; i < casts.size(); ++i) b.event(numbered("broadcast", i), "broadcast", casts[i]);

  Rng crowd_rng = rng.fork("crowd");
  b.crowd_segments(crowd_rng, [](Rng& r, double) { return around(r, 4.0, 9.0); });
  return b.finish();
}

}  // namespace

Scene generate_scenario(const ScenarioTemplate& tmpl, std::uint64_t seed) {
  const Rng root(mix_seed(seed, hash_name(to_string(tmpl.id))));
  std::string failed = "scenario.duration_positive";
  if (!(tmpl.duration > 0.0)) throw InfeasibleError(failed, "template duration must be > 0");
  for (int ext = 0; ext <= static_cast<int>(kMaxDurationExtension); ++ext) {
    Rng rng = root.fork("attempt-" + std::to_string(ext));
    const double d = tmpl.duration + ext;
    try {
      switch (tmpl.id) {
        case ScenarioId::RwFocused: return build_rw_focused(d, seed, rng);
        case ScenarioId::VrFocused: return build_vr_focused(d, seed, rng);
        case ScenarioId::FullyMixed: return build_fully_mixed(d, seed, rng);
      }
    } catch (const PackFailure& f) {
      failed = f.constraint;
    }
  }
  throw InfeasibleError(failed, "could not pack " + std::string(to_string(tmpl.id)) +
                                    " within " + std::to_string(tmpl.duration) + " + " +
                                    std::to_string(kMaxDurationExtension) + " s");
}

}  // namespace mrmix
