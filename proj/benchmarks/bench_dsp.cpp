#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "mrmix/dsp.hpp"

using namespace mrmix;

namespace {

std::vector<double> noise(std::size_t n) {
  std::vector<double> x(n);
  std::uint64_t s = 1;
  for (auto& v : x) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    v = static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  return x;
}

}  // namespace

static void BM_Biquad(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const dsp::FilterStage hp = dsp::design_highpass(1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::apply_filter(x, hp));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Biquad)->Arg(48000)->Arg(48000 * 90);

static void BM_Resample(benchmark::State& state) {
  const auto x = noise(48000);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::resample_ratio(x, 1.5));
  state.SetItemsProcessed(state.iterations() * 48000);
}
BENCHMARK(BM_Resample);

static void BM_MixMono(benchmark::State& state) {
  const auto x = noise(96000);
  dsp::StereoBuffer out(48000 * 90);
  for (auto _ : state) {
    dsp::mix_mono_into(out, x, 48000, {0.5, 0.5});
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * 96000);
}
BENCHMARK(BM_MixMono);
