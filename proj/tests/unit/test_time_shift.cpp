#include <gtest/gtest.h>

#include <map>
#include <random>

#include "mrmix/scheduler.hpp"
#include "mrmix/presets.hpp"
#include "mrmix/time_shift.hpp"
#include "oracles.hpp"
#include "schedules.hpp"

using namespace mrmix;

namespace {

TimelineEntry entry(std::string id, SoundCategory cat, double onset, double duration) {
  TimelineEntry e;
  e.event_id = id;
  e.source = id;
  e.category = cat;
  e.scheduled_onset = onset;
  e.actual_onset = onset;
  e.duration = duration;
  return e;
}

const TimelineEntry& by_id(const std::vector<TimelineEntry>& es, const std::string& id) {
  for (const auto& e : es)
    if (e.event_id == id) return e;
  throw std::runtime_error("no entry " + id);
}

}  // namespace

TEST(TimeShift, DelaysPastProtectedInterval) {
  std::vector<ProtectedInterval> spans{{2.0, 4.0, "rw"}};
  auto out = time_shift({entry("vr", SoundCategory::Virtual, 3.0, 1.0)}, spans, 0.0, 90.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].actual_onset, 4.0);
  EXPECT_TRUE(out[0].has_tag(tag::kTimeShift));

  const auto grid = oracle::time_shift_grid({{3.0, 1.0, true}}, {{2.0, 4.0}}, 0.0);
  EXPECT_NEAR(grid[0], 4.0, 1e-9);
}

TEST(TimeShift, NoProtectionIsIdentity) {
  std::vector<TimelineEntry> in{entry("a", SoundCategory::Virtual, 1.0, 2.0),
                                entry("b", SoundCategory::Virtual, 1.5, 2.0),
                                entry("c", SoundCategory::RealWorld, 0.5, 1.0)};
  auto out = time_shift(in, {}, 0.3, 90.0);
  for (const auto& e : out) {
    EXPECT_EQ(e.actual_onset, e.scheduled_onset) << e.event_id;
    EXPECT_FALSE(e.has_tag(tag::kTimeShift));
  }
}

// Guard-inflated protection reaches to 4.1, so the first event cannot start
// before it; the second queues behind the first plus the guard.
TEST(TimeShift, TwoEventsQueueWithGuard) {
  const double d1 = 1.0;
  std::vector<ProtectedInterval> spans{{2.0, 4.0, "rw"}};
  auto out = time_shift({entry("first", SoundCategory::Virtual, 3.0, d1),
                         entry("second", SoundCategory::Virtual, 3.2, 0.7)},
                        spans, 0.1, 90.0);
  EXPECT_NEAR(by_id(out, "first").actual_onset, 4.1, 1e-12);
  EXPECT_NEAR(by_id(out, "second").actual_onset, 4.1 + d1 + 0.1, 1e-12);

  const auto grid = oracle::time_shift_grid({{3.0, d1, true}, {3.2, 0.7, true}}, {{2.0, 4.0}}, 0.1);
  EXPECT_NEAR(grid[0], 4.1, 1e-9);
  EXPECT_NEAR(grid[1], 4.1 + d1 + 0.1, 1e-9);
}

TEST(TimeShift, RealWorldEventsNeverMove) {
  std::vector<ProtectedInterval> spans{{0.0, 10.0, "rw"}};
  auto out = time_shift({entry("rw", SoundCategory::RealWorld, 1.0, 2.0)}, spans, 0.0, 90.0);
  EXPECT_EQ(out[0].actual_onset, 1.0);
}

TEST(TimeShift, FitsIntoGapBetweenIntervals) {
  std::vector<ProtectedInterval> spans{{2.0, 4.0, "a"}, {6.0, 8.0, "b"}};
  auto out = time_shift({entry("short", SoundCategory::Virtual, 3.0, 1.5),
                         entry("long", SoundCategory::Virtual, 3.5, 2.5)},
                        spans, 0.0, 90.0);
  EXPECT_DOUBLE_EQ(by_id(out, "short").actual_onset, 4.0);
  // [4, 5.5) is taken and [5.5, 8) is too narrow for 2.5 s.
  EXPECT_DOUBLE_EQ(by_id(out, "long").actual_onset, 8.0);
}

TEST(TimeShift, PushedPastAllowanceIsDroppedNotRemoved) {
  std::vector<ProtectedInterval> spans{{5.0, 20.0, "rw"}};
  auto out = time_shift({entry("late", SoundCategory::Virtual, 6.0, 2.0)}, spans, 0.0, 14.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out[0].dropped);
  EXPECT_DOUBLE_EQ(out[0].actual_onset, 20.0);
}

TEST(TimeShift, OutputSortedByActualOnset) {
  std::vector<ProtectedInterval> spans{{1.0, 5.0, "rw"}};
  auto out = time_shift({entry("moved", SoundCategory::Virtual, 2.0, 1.0),
                         entry("stays", SoundCategory::Virtual, 6.0, 1.0)},
                        spans, 0.0, 90.0);
  EXPECT_EQ(out[0].event_id, "moved");
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LE(out[i - 1].actual_onset, out[i].actual_onset);
}

TEST(TimeShift, MatchesGridOracleOnRandomInstances) {
  std::mt19937_64 gen(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = fixture::random_shift_instance(gen, 4, 5, 30.0);
    auto out = time_shift(inst.entries, inst.spans, inst.guard, 1e6);
    const auto expect = oracle::time_shift_grid(fixture::as_oracle_events(inst.entries),
                                                fixture::as_oracle_spans(inst.spans), inst.guard);
    for (std::size_t i = 0; i < inst.entries.size(); ++i)
      EXPECT_NEAR(by_id(out, inst.entries[i].event_id).actual_onset, expect[i], 1e-6)
          << "trial " << trial << " event " << inst.entries[i].event_id;
  }
}

TEST(TimeShift, InvariantsHoldOnRandomSchedules) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = fixture::random_shift_instance(gen, 8, 12, 60.0);
    auto out = time_shift(inst.entries, inst.spans, inst.guard, inst.duration);
    ASSERT_EQ(out.size(), inst.entries.size());
    for (const auto& e : out) {
      EXPECT_GE(e.actual_onset, e.scheduled_onset);
      if (e.category != SoundCategory::Virtual || e.dropped) continue;
      for (const auto& p : inst.spans)
        EXPECT_FALSE(oracle::overlaps({e.actual_onset, e.actual_onset + e.duration},
                                      {p.start - inst.guard, p.end + inst.guard}))
            << "trial " << trial << " " << e.event_id;
    }
    for (const auto& a : out)
      for (const auto& b : out)
        if (a.has_tag(tag::kTimeShift) && b.has_tag(tag::kTimeShift) &&
            a.scheduled_onset < b.scheduled_onset) {
          EXPECT_LE(a.actual_onset, b.actual_onset);
        }
    EXPECT_EQ(time_shift(out, inst.spans, inst.guard, inst.duration), out) << "trial " << trial;
  }
}

TEST(ProtectedIntervals, EmptySelectorSetGivesNothing) {
  const Scene s = generate_scenario(ScenarioId::RwFocused, 3);
  ManipulationPlan p = preset_plan(Condition::Manipulated, s);
  p.time_shift.protected_selectors.clear();
  EXPECT_TRUE(protected_intervals(s, p).empty());
}

TEST(ProtectedIntervals, DrillingEventsGiveTheirOwnBounds) {
  const Scene s = generate_scenario(ScenarioId::RwFocused, 3);
  ManipulationPlan p = preset_plan(Condition::Manipulated, s);
  p.time_shift.protected_selectors = {"drilling"};
  const auto spans = protected_intervals(s, p);
  ASSERT_EQ(spans.size(), 5u);
  std::map<std::string, const SoundEvent*> events;
  for (const auto& e : s.events) events[e.source] = &e;
  for (const auto& sp : spans) {
    EXPECT_EQ(sp.source.rfind("drilling", 0), 0u);
    EXPECT_DOUBLE_EQ(sp.start, events[sp.source]->scheduled_onset);
    EXPECT_DOUBLE_EQ(sp.end, events[sp.source]->end());
  }
}

TEST(ProtectedIntervals, OverlappingEventsStayUnmerged) {
  Scene s;
  s.duration = 20.0;
  s.sources = {{"a", "knock", "", SoundCategory::RealWorld, SpatialPlacement{}, 1, true},
               {"b", "knock", "", SoundCategory::RealWorld, SpatialPlacement{}, 2, true}};
  s.events = {{"a1", "a", 1.0, 3.0, false}, {"b1", "b", 2.0, 3.0, false}};
  ManipulationPlan p;
  p.time_shift = {true, 0.0, {"protected"}};
  const auto spans = protected_intervals(s, p);
  ASSERT_EQ(spans.size(), 2u);
  // The union is [1, 5); the shifter must treat it as one block.
  auto out = time_shift({entry("v", SoundCategory::Virtual, 3.5, 1.0)}, spans, 0.0, 20.0);
  EXPECT_DOUBLE_EQ(out[0].actual_onset, 5.0);
}

TEST(ProtectedIntervals, DisabledTimeShiftGivesNothing) {
  const Scene s = generate_scenario(ScenarioId::VrFocused, 5);
  ManipulationPlan p = preset_plan(Condition::Manipulated, s);
  p.time_shift.enabled = false;
  EXPECT_TRUE(protected_intervals(s, p).empty());
}
