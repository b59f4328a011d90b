#include <benchmark/benchmark.h>

#include <random>

#include "mrmix/manipulation.hpp"
#include "mrmix/presets.hpp"
#include "mrmix/render.hpp"
#include "mrmix/scheduler.hpp"
#include "mrmix/synth.hpp"
#include "mrmix/time_shift.hpp"

using namespace mrmix;

static void BM_Generate(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(generate_scenario(ScenarioId::FullyMixed, seed++));
}
BENCHMARK(BM_Generate);

static void BM_TimeShift(benchmark::State& state) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> onset(0.0, 80.0), len(0.2, 4.0);
  std::vector<TimelineEntry> entries;
  std::vector<ProtectedInterval> spans;
  for (int i = 0; i < state.range(0); ++i) {
    TimelineEntry e;
    e.event_id = "e" + std::to_string(i);
    e.category = i % 2 ? SoundCategory::Virtual : SoundCategory::RealWorld;
    e.scheduled_onset = e.actual_onset = onset(gen);
    e.duration = len(gen);
    if (i % 2 == 0) spans.push_back({e.scheduled_onset, e.scheduled_onset + e.duration, e.event_id});
    entries.push_back(e);
  }
  for (auto _ : state) benchmark::DoNotOptimize(time_shift(entries, spans, 0.1, 90.0));
}
BENCHMARK(BM_TimeShift)->Arg(22)->Arg(200);

static void BM_Compile(benchmark::State& state) {
  const Scene s = generate_scenario(ScenarioId::RwFocused, 1);
  const ManipulationPlan plan = preset_plan(Condition::Manipulated, s);
  for (auto _ : state) benchmark::DoNotOptimize(compile_directives(s, plan));
}
BENCHMARK(BM_Compile);

static void BM_Render(benchmark::State& state) {
  const Scene s = generate_scenario(ScenarioId::RwFocused, 1);
  const ClipBank bank = default_clip_bank(s.seed);
  const ManipulationPlan plan = preset_plan(Condition::Manipulated, s);
  for (auto _ : state)
    benchmark::DoNotOptimize(render(s, plan, bank, {static_cast<unsigned>(state.range(0)), 1.0}));
}
BENCHMARK(BM_Render)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ClipBank(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(default_clip_bank(seed++));
}
BENCHMARK(BM_ClipBank)->Unit(benchmark::kMillisecond);
