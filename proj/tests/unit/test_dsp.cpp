#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mrmix/dsp.hpp"
#include "mrmix/errors.hpp"
#include "oracles.hpp"

using namespace mrmix;
using namespace mrmix::dsp;

namespace {

constexpr double kPi = std::numbers::pi;

double gain_db(const FilterStage& stage, double hz) {
  const auto in = oracle::sine(hz, 1.0);
  const auto out = apply_filter(in, stage);
  return oracle::db(oracle::steady_rms(out) / oracle::steady_rms(in));
}

double cascade_gain_db(const std::vector<FilterStage>& chain, double hz) {
  const auto in = oracle::sine(hz, 1.0);
  std::vector<double> out = in;
  for (const auto& s : chain) apply_filter_in_place(out, s);
  return oracle::db(oracle::steady_rms(out) / oracle::steady_rms(in));
}

}  // namespace

TEST(Pan, CenterIsEqualSplit) {
  const PanGains g = pan_gains(0.0);
  EXPECT_NEAR(g.left, std::sqrt(2.0) / 2.0, 1e-12);
  EXPECT_NEAR(g.right, std::sqrt(2.0) / 2.0, 1e-12);
}

TEST(Pan, HardLeftAndRight) {
  PanGains g = pan_gains(-kPi / 2.0);
  EXPECT_NEAR(g.left, 1.0, 1e-12);
  EXPECT_NEAR(g.right, 0.0, 1e-12);
  g = pan_gains(kPi / 2.0);
  EXPECT_NEAR(g.left, 0.0, 1e-12);
  EXPECT_NEAR(g.right, 1.0, 1e-12);
}

TEST(Pan, EqualPowerAtQuarterPi) {
  const PanGains g = pan_gains(kPi / 4.0);
  EXPECT_NEAR(g.left * g.left + g.right * g.right, 1.0, 1e-9);
  EXPECT_GT(g.right, g.left);
}

TEST(Pan, EqualPowerForRandomAzimuths) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> az(-kPi / 2.0, kPi / 2.0);
  for (int i = 0; i < 1000; ++i) {
    const PanGains g = pan_gains(az(gen));
    EXPECT_NEAR(g.left * g.left + g.right * g.right, 1.0, 1e-9);
  }
}

TEST(Pan, MonoToStereoAppliesGains) {
  const std::vector<double> mono{1.0, -0.5, 0.25};
  const StereoBuffer s = pan_equal_power(mono, -kPi / 2.0);
  ASSERT_EQ(s.frames(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(s.left[i], mono[i], 1e-12);
    EXPECT_NEAR(s.right[i], 0.0, 1e-12);
  }
}

TEST(Azimuth, ConventionsAtZeroYaw) {
  EXPECT_NEAR(azimuth_of({0, 0, 1}, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(azimuth_of({1, 0, 0}, 0.0), kPi / 2.0, 1e-12);
  EXPECT_NEAR(azimuth_of({-1, 0, 0}, 0.0), -kPi / 2.0, 1e-12);
  EXPECT_NEAR(std::abs(azimuth_of({0, 0, -1}, 0.0)), kPi, 1e-12);
}

TEST(Azimuth, TurningRightMovesSourcesLeft) {
  // Facing +x, a source straight ahead on +z is now on the left.
  EXPECT_NEAR(azimuth_of({0, 0, 1}, kPi / 2.0), -kPi / 2.0, 1e-12);
  EXPECT_NEAR(azimuth_of({1, 0, 0}, kPi / 2.0), 0.0, 1e-12);
}

TEST(Azimuth, RearFoldKeepsSideAndAttenuates) {
  const FoldedAzimuth behind_right = fold_rear(3.0 * kPi / 4.0);
  EXPECT_NEAR(behind_right.azimuth, kPi / 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(behind_right.gain, kRearGain);
  const FoldedAzimuth behind_left = fold_rear(-3.0 * kPi / 4.0);
  EXPECT_NEAR(behind_left.azimuth, -kPi / 4.0, 1e-12);
  const FoldedAzimuth front = fold_rear(0.3);
  EXPECT_DOUBLE_EQ(front.azimuth, 0.3);
  EXPECT_DOUBLE_EQ(front.gain, 1.0);
}

TEST(Distance, InverseLawWithClamp) {
  EXPECT_DOUBLE_EQ(distance_gain(0.5), 1.0);
  EXPECT_DOUBLE_EQ(distance_gain(1.0), 1.0);
  EXPECT_DOUBLE_EQ(distance_gain(4.0), 0.25);
  EXPECT_DOUBLE_EQ(distance_gain(0.0), 1.0);
  EXPECT_DOUBLE_EQ(distance_gain(6.0, 2.0), 2.0 / 6.0);
}

TEST(Biquad, HighpassIsThreeDbDownAtCutoff) {
  for (double fc : {300.0, 1000.0, 2000.0, 5000.0})
    EXPECT_NEAR(gain_db(design_highpass(fc), fc), -3.0, 0.5) << fc;
}

TEST(Biquad, LowpassIsThreeDbDownAtCutoff) {
  for (double fc : {300.0, 800.0, 3400.0, 10000.0})
    EXPECT_NEAR(gain_db(design_lowpass(fc), fc), -3.0, 0.5) << fc;
}

TEST(Biquad, HighpassOctaveIntoStopband) {
  for (double fc : {500.0, 1000.0, 2000.0}) EXPECT_LE(gain_db(design_highpass(fc), fc / 2.0), -11.0) << fc;
}

TEST(Biquad, LowpassOctaveIntoStopband) {
  for (double fc : {500.0, 800.0, 3400.0}) EXPECT_LE(gain_db(design_lowpass(fc), fc * 2.0), -11.0) << fc;
}

TEST(Biquad, HighpassDecadeBelowIsDeep) {
  EXPECT_LE(gain_db(design_highpass(1000.0), 100.0), -20.0);
}

TEST(Biquad, LowpassPassbandIsFlat) {
  EXPECT_NEAR(gain_db(design_lowpass(20000.0), 440.0), 0.0, 0.1);
}

TEST(Biquad, TelephoneBandPassesOneKilohertz) {
  const std::vector<FilterStage> chain{design_highpass(300.0), design_lowpass(3400.0)};
  EXPECT_GE(cascade_gain_db(chain, 1000.0), -1.5);
  EXPECT_LE(cascade_gain_db(chain, 100.0), -15.0);
  EXPECT_LE(cascade_gain_db(chain, 10000.0), -15.0);
}

TEST(Biquad, HighpassRejectsDc) {
  std::vector<double> impulse(kSampleRate, 0.0);
  impulse[0] = 1.0;
  const auto h = apply_filter(impulse, design_highpass(1000.0));
  double sum = 0.0;
  for (double v : h) sum += v;
  EXPECT_LT(std::abs(sum), 1e-3);
}

TEST(Biquad, BypassIsIdentity) {
  const auto in = oracle::sine(440.0, 0.1);
  EXPECT_EQ(apply_filter(in, Bypass{}), in);
}

TEST(Biquad, DesignedFiltersAreStableAndDecay) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> logf(std::log(20.0), std::log(23000.0));
  for (int i = 0; i < 200; ++i) {
    const double fc = std::exp(logf(gen));
    for (const BiquadCoeffs& c : {design_highpass(fc), design_lowpass(fc)}) {
      ASSERT_TRUE(c.stable()) << fc;
      std::vector<double> impulse(2 * kSampleRate, 0.0);
      impulse[0] = 1.0;
      const auto h = apply_filter(impulse, c);
      double tail = 0.0;
      for (std::size_t n = kSampleRate + 1; n < h.size(); ++n) tail = std::max(tail, std::abs(h[n]));
      EXPECT_LT(tail, 1e-6) << fc;
    }
  }
}

TEST(Biquad, RejectsOutOfRangeCutoff) {
  EXPECT_THROW(design_highpass(0.0), InvariantError);
  EXPECT_THROW(design_lowpass(-5.0), InvariantError);
  EXPECT_THROW(design_lowpass(24000.0), InvariantError);
  try {
    design_highpass(30000.0);
  } catch (const InvariantError& e) {
    EXPECT_EQ(e.rule(), "filter.cutoff_range");
  }
}

TEST(Resample, UnitRatioIsIdentity) {
  const auto in = oracle::sine(440.0, 0.1);
  EXPECT_EQ(resample_ratio(in, 1.0), in);
}

TEST(Resample, DoublingRaisesPitchAnOctave) {
  const auto out = resample_ratio(oracle::sine(440.0, 1.0), 2.0);
  EXPECT_NEAR(oracle::spectral_peak(out, 800.0, 960.0), 880.0, 5.0);
}

TEST(Resample, LengthFollowsRatio) {
  const std::vector<double> in(48000, 0.1);
  EXPECT_EQ(resample_ratio(in, 2.0).size(), 24000u);
  EXPECT_EQ(resample_ratio(in, 0.5).size(), 96000u);
  EXPECT_EQ(resample_ratio(std::vector<double>(1001, 0.0), 3.0).size(), 334u);
}

TEST(Resample, RejectsOutOfRange) {
  const std::vector<double> in(10, 0.0);
  EXPECT_THROW(resample_ratio(in, 0.2), InvariantError);
  EXPECT_THROW(resample_ratio(in, 4.5), InvariantError);
}

TEST(Resample, ClipOverloadKeepsChannelsAndId) {
  AudioClip c{"x", 1, std::vector<float>(4800, 0.5f)};
  const AudioClip r = resample_ratio(c, 2.0);
  EXPECT_EQ(r.id, "x");
  EXPECT_EQ(r.frames(), 2400u);
}

TEST(Mix, SilenceLeavesDestinationUnchanged) {
  StereoBuffer dest(8);
  dest.left[3] = 0.25;
  const StereoBuffer before = dest;
  mix_into(dest, StereoBuffer(4), 2, 1.0);
  EXPECT_EQ(dest, before);
}

TEST(Mix, ImpulseLandsAtOffset) {
  StereoBuffer dest(20);
  StereoBuffer imp(1);
  imp.left[0] = 1.0;
  imp.right[0] = 1.0;
  mix_into(dest, imp, 10, 0.5);
  EXPECT_DOUBLE_EQ(dest.left[10], 0.5);
  EXPECT_DOUBLE_EQ(dest.right[10], 0.5);
  EXPECT_DOUBLE_EQ(dest.left[9], 0.0);
}

TEST(Mix, GrowsDestination) {
  StereoBuffer dest(4);
  StereoBuffer src(4);
  src.left.assign(4, 1.0);
  mix_into(dest, src, 3, 1.0);
  EXPECT_EQ(dest.frames(), 7u);
  EXPECT_DOUBLE_EQ(dest.left[6], 1.0);
}

TEST(Mix, OrderDoesNotMatterForTwoSources) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StereoBuffer a(100), b(100);
  for (std::size_t i = 0; i < 100; ++i) {
    a.left[i] = u(gen);
    a.right[i] = u(gen);
    b.left[i] = u(gen);
    b.right[i] = u(gen);
  }
  StereoBuffer ab(50), ba(50);
  mix_into(ab, a, 5, 0.7);
  mix_into(ab, b, 17, 0.3);
  mix_into(ba, b, 17, 0.3);
  mix_into(ba, a, 5, 0.7);
  EXPECT_EQ(ab, ba);
}

TEST(Finalize, InRangeIsUntouched) {
  StereoBuffer b(3);
  b.left = {0.1, -0.2, 0.3};
  b.right = {0.0, 1.0, -1.0};
  const Finalized f = finalize(b);
  EXPECT_EQ(f.report.clipped_samples, 0u);
  EXPECT_EQ(f.buffer, b);
}

TEST(Finalize, ClampsAndCounts) {
  StereoBuffer b(1);
  b.left = {1.5};
  b.right = {0.0};
  const Finalized f = finalize(b, 1.0);
  EXPECT_DOUBLE_EQ(f.buffer.left[0], 1.0);
  EXPECT_EQ(f.report.clipped_samples, 1u);
}

TEST(Finalize, MasterGainScales) {
  StereoBuffer b(2);
  b.left = {0.5, -0.8};
  b.right = {0.2, 0.4};
  const Finalized f = finalize(b, 0.5);
  EXPECT_DOUBLE_EQ(f.buffer.left[0], 0.25);
  EXPECT_DOUBLE_EQ(f.buffer.left[1], -0.4);
  EXPECT_DOUBLE_EQ(f.buffer.right[1], 0.2);
}
