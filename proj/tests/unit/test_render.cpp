#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mrmix/errors.hpp"
#include "mrmix/presets.hpp"
#include "mrmix/render.hpp"
#include "mrmix/scheduler.hpp"
#include "mrmix/synth.hpp"
#include "mrmix/wav.hpp"
#include "oracles.hpp"

using namespace mrmix;

namespace {

ClipBank impulse_bank() {
  AudioClip impulse{"impulse", 1, std::vector<float>(480, 0.0f)};
  impulse.samples[0] = 1.0f;
  return {{"impulse", impulse}};
}

Scene empty_scene(double duration) {
  Scene s;
  s.id = "empty";
  s.duration = duration;
  s.listener.waypoints = {{0.0, {}, 0.0}};
  return s;
}

Scene impulse_scene(Placement placement) {
  Scene s = empty_scene(3.0);
  SoundSource src;
  src.id = "click";
  src.clip = "impulse";
  src.category = std::holds_alternative<EarPlacement>(placement) ? SoundCategory::Virtual
                                                                  : SoundCategory::RealWorld;
  src.placement = placement;
  src.identification_key = 1;
  s.sources = {src};
  s.events = {{"click_1", "click", 1.0, 0.01, false}};
  return s;
}

}  // namespace

TEST(Render, EmptySceneIsSilent) {
  const Scene s = empty_scene(2.5);
  const auto r = render(s, ManipulationPlan{}, impulse_bank());
  EXPECT_EQ(r.buffer.frames(), 120000u);
  for (std::size_t i = 0; i < r.buffer.frames(); ++i) {
    ASSERT_EQ(r.buffer.left[i], 0.0);
    ASSERT_EQ(r.buffer.right[i], 0.0);
  }
  EXPECT_EQ(r.report.clipped_samples, 0u);
}

TEST(Render, ImpulseLandsOnItsSample) {
  const Scene s = impulse_scene(EarPlacement{Ear::Left});
  const auto r = render(s, ManipulationPlan{}, impulse_bank());
  EXPECT_DOUBLE_EQ(r.buffer.left[48000], 0.5);
  EXPECT_EQ(r.buffer.right[48000], 0.0);
  EXPECT_EQ(r.buffer.left[47999], 0.0);
  EXPECT_EQ(r.buffer.left[48001], 0.0);
}

TEST(Render, RightSideSourceIsLouderOnTheRight) {
  const Scene s = impulse_scene(SpatialPlacement{{3.0, 0.0, 1.0}});
  ClipBank bank = default_clip_bank(1);
  bank["impulse"] = bank.at("knock");
  const auto r = render(s, ManipulationPlan{}, bank);
  EXPECT_GT(oracle::rms(r.buffer.right), 2.0 * oracle::rms(r.buffer.left));
}

TEST(Render, SpatialGainsMatchHandComputation) {
  // Source 2 m ahead and 2 m right: azimuth pi/4, distance sqrt(8).
  RenderDirective d;
  d.gain = 0.5;
  d.placement = SpatialPlacement{{2.0, 0.0, 2.0}};
  ListenerPath path;
  path.waypoints = {{0.0, {}, 0.0}};
  const auto g = directive_gains(d, path);
  const double theta = (std::numbers::pi / 4 + std::numbers::pi / 2) / 2;
  const double dist = 1.0 / std::sqrt(8.0);
  EXPECT_NEAR(g.left, 0.5 * dist * std::cos(theta), 1e-12);
  EXPECT_NEAR(g.right, 0.5 * dist * std::sin(theta), 1e-12);
}

TEST(Render, ListenerRelativeIgnoresListenerPose) {
  RenderDirective d;
  d.placement = SpatialPlacement{{-1.0, 0.0, 0.0}, true};
  ListenerPath path;
  path.waypoints = {{0.0, {50, 0, 50}, 1.0}};
  const auto g = directive_gains(d, path);
  EXPECT_NEAR(g.left, 1.0, 1e-12);
  EXPECT_NEAR(g.right, 0.0, 1e-12);
}

TEST(Render, EarPlacementGains) {
  RenderDirective d;
  d.gain = 0.4;
  ListenerPath path;
  d.placement = EarPlacement{Ear::Right};
  EXPECT_EQ(directive_gains(d, path).left, 0.0);
  EXPECT_EQ(directive_gains(d, path).right, 0.4);
  d.placement = EarPlacement{Ear::Both};
  EXPECT_NEAR(directive_gains(d, path).left, 0.4 * std::sqrt(0.5), 1e-15);
}

TEST(Render, LoopFillsTheWindow) {
  const ClipBank bank = impulse_bank();
  RenderDirective d;
  d.clip = "impulse";
  d.duration = 0.05;
  d.loop = true;
  const auto sig = directive_signal(d, bank);
  ASSERT_EQ(sig.size(), 2400u);
  for (std::size_t i = 0; i < sig.size(); ++i) EXPECT_EQ(sig[i], i % 480 == 0 ? 1.0 : 0.0);
  d.loop = false;
  d.duration = 0.001;
  EXPECT_EQ(directive_signal(d, bank).size(), 48u);
}

TEST(Render, MixIsLinear) {
  const Scene s = generate_scenario(ScenarioId::FullyMixed, 4);
  const ClipBank bank = default_clip_bank(s.seed);
  const auto c = compile_directives(s, preset_plan(Condition::Manipulated, s));
  std::vector<RenderDirective> even, odd;
  for (std::size_t i = 0; i < c.directives.size(); ++i) (i % 2 ? odd : even).push_back(c.directives[i]);
  const auto all = mix_directives(c.directives, s.listener, bank, s.duration);
  auto a = mix_directives(even, s.listener, bank, s.duration);
  const auto b = mix_directives(odd, s.listener, bank, s.duration);
  a.resize(std::max(a.frames(), b.frames()));
  ASSERT_EQ(all.frames(), a.frames());
  double worst = 0.0;
  for (std::size_t i = 0; i < all.frames(); ++i) {
    const double l = i < b.frames() ? b.left[i] : 0.0;
    const double r = i < b.frames() ? b.right[i] : 0.0;
    worst = std::max({worst, std::abs(all.left[i] - a.left[i] - l), std::abs(all.right[i] - a.right[i] - r)});
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Render, ThreadCountDoesNotChangeOutput) {
  const Scene s = generate_scenario(ScenarioId::RwFocused, 1);
  const ClipBank bank = default_clip_bank(s.seed);
  const ManipulationPlan plan = preset_plan(Condition::Manipulated, s);
  const auto one = render(s, plan, bank, {1, 1.0});
  const auto four = render(s, plan, bank, {4, 1.0});
  EXPECT_EQ(encode_wav(one.buffer), encode_wav(four.buffer));
  EXPECT_EQ(one.timeline, four.timeline);
}

TEST(Render, InvalidInputsAreRejected) {
  Scene s = impulse_scene(EarPlacement{Ear::Left});
  s.events[0].scheduled_onset = 10.0;
  EXPECT_THROW(render(s, ManipulationPlan{}, impulse_bank()), InvariantError);
  s = impulse_scene(EarPlacement{Ear::Left});
  ManipulationPlan plan;
  plan.transparency.tau = 2.0;
  EXPECT_THROW(render(s, plan, impulse_bank()), InvariantError);
  EXPECT_THROW(render(s, ManipulationPlan{}, ClipBank{}), Error);
}

TEST(Render, ReportCountsClipping) {
  const Scene s = impulse_scene(EarPlacement{Ear::Left});
  const auto r = render(s, ManipulationPlan{}, impulse_bank(), {1, 4.0});
  EXPECT_EQ(r.report.clipped_samples, 1u);
  EXPECT_EQ(r.buffer.left[48000], 1.0);
}

TEST(Wav, SilenceLayout) {
  const auto bytes = encode_wav(dsp::StereoBuffer(48000));
  EXPECT_EQ(bytes.size(), kWavHeaderBytes + 192000u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "RIFF");
  EXPECT_EQ(std::string(bytes.begin() + 8, bytes.begin() + 12), "WAVE");
}

TEST(Wav, Quantization) {
  EXPECT_EQ(quantize_sample(1.0), 32767);
  EXPECT_EQ(quantize_sample(-1.0), -32767);
  EXPECT_EQ(quantize_sample(2.0), 32767);
  EXPECT_EQ(quantize_sample(0.0), 0);
  EXPECT_EQ(quantize_sample(0.5 / 32767), 1);
}

TEST(Wav, RoundTrip) {
  dsp::StereoBuffer b(1000);
  for (std::size_t i = 0; i < b.frames(); ++i) {
    b.left[i] = std::sin(i * 0.01);
    b.right[i] = -0.5 * std::cos(i * 0.02);
  }
  const AudioClip c = decode_wav(encode_wav(b), "x");
  ASSERT_EQ(c.channels, 2);
  ASSERT_EQ(c.frames(), 1000u);
  for (std::size_t i = 0; i < 1000; ++i) {
    EXPECT_NEAR(c.samples[2 * i], b.left[i], 1.0 / 32768);
    EXPECT_NEAR(c.samples[2 * i + 1], b.right[i], 1.0 / 32768);
  }
  EXPECT_EQ(encode_wav(decode_wav(encode_wav(b))), encode_wav(b));
}

TEST(Wav, RejectsBadInput) {
  dsp::StereoBuffer b(4);
  b.left[1] = std::nan("");
  EXPECT_THROW(encode_wav(b), Error);
  std::vector<std::uint8_t> junk(60, 0);
  EXPECT_THROW(decode_wav(junk), Error);
}
