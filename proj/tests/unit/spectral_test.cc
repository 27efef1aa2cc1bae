// Copyright 2026 The barstress Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/spectral.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/oracles.h"
#include "core/synth.h"
#include "data/published_tables.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace barstress {
namespace {

using testing::MiniMontage;

Epoch SingleChannelEpoch(std::vector<double> x, double fs) {
  Epoch e;
  e.channels = testing::DefaultChannels({"Cz"});
  e.samples = {std::move(x)};
  e.sampling_rate = fs;
  e.t_end = static_cast<double>(e.samples[0].size()) / fs;
  return e;
}

Epoch WholeRecording(const Recording& r) {
  return SliceWindow(r, 0.0, r.duration());
}

double MaxRelError(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < want.size(); ++k) {
    num = std::max(num, std::abs(got[k] - want[k]));
    den = std::max(den, std::abs(want[k]));
  }
  return num / den;
}

Recording SynthMini(double alpha, double beta, double duration, double fs,
                    std::uint64_t seed) {
  SynthSpec spec;
  spec.duration = duration;
  spec.sampling_rate = fs;
  spec.montage = MiniMontage();
  spec.targets = {{*StandardBand("alpha"), alpha}, {*StandardBand("beta"), beta}};
  spec.seed = seed;
  return SynthEeg(spec);
}

TEST(WindowPowerNormTest, Examples) {
  for (std::size_t m : {1u, 7u, 2000u}) {
    EXPECT_EQ(WindowPowerNorm(Taper::kRectangular, m), 1.0);
  }
  EXPECT_NEAR(WindowPowerNorm(Taper::kHann, 4), 0.375, 1e-15);
  for (auto [taper, name] : {std::pair{Taper::kHamming, "hamming"},
                             std::pair{Taper::kHann, "hann"}}) {
    const auto w = oracle::Taper(name, 2000);
    long double sum = 0.0L;
    for (long double v : w) sum += v * v;
    const double u = WindowPowerNorm(taper, 2000);
    EXPECT_NEAR(u, static_cast<double>(sum / 2000), 1e-12);
    EXPECT_GT(u, 0.0);
    EXPECT_LE(u, 1.0);
  }
  EXPECT_BS_ERROR(WindowPowerNorm(Taper::kHann, 0), ErrorCode::kInvalidArgument);
}

TEST(TaperTest, NamesRoundTrip) {
  for (Taper t : {Taper::kHamming, Taper::kHann, Taper::kRectangular}) {
    EXPECT_EQ(ParseTaper(ToString(t)), t);
  }
  EXPECT_BS_ERROR(ParseTaper("kaiser"), ErrorCode::kInvalidConfig);
}

TEST(PeriodogramTest, ZeroSegmentGivesZeroSpectrum) {
  const auto p = PeriodogramSegment(std::vector<double>(64, 0.0), Taper::kHamming,
                                    WindowPowerNorm(Taper::kHamming, 64), 128, 100.0);
  ASSERT_EQ(p.size(), 65u);
  for (double v : p) EXPECT_EQ(v, 0.0);
}

TEST(PeriodogramTest, BinSinusoidHasOneNonzeroBin) {
  const std::size_t m = 256;
  const double fs = 128.0;
  const std::size_t k0 = 20;
  std::vector<double> x(m);
  for (std::size_t n = 0; n < m; ++n) x[n] = std::cos(2.0 * M_PI * k0 * n / m);
  const auto p = PeriodogramSegment(x, Taper::kRectangular, 1.0, m, fs);
  // |X_k0|^2 = (M/2)^2, doubled for the one-sided fold, over M * fs.
  EXPECT_NEAR(p[k0], m / (2.0 * fs), 1e-12);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k != k0) EXPECT_LT(p[k], 1e-20 * p[k0]) << k;
  }
  double total = 0.0;
  for (double v : p) total += v * fs / m;
  EXPECT_NEAR(total, 0.5, 1e-12);  // power of a unit sinusoid
}

TEST(PeriodogramTest, WhiteNoiseIntegratesToVariance) {
  const auto x = testing::WhiteNoise(1024, 3, 2.0);
  const double fs = 256.0;
  const auto p = PeriodogramSegment(x, Taper::kRectangular, 1.0, 1024, fs);
  double total = 0.0;
  for (double v : p) total += v * fs / 1024;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / 1024;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= 1024;
  EXPECT_NEAR(total, var, 0.05 * var);
}

TEST(PeriodogramTest, ErrorCases) {
  EXPECT_BS_ERROR(PeriodogramSegment({}, Taper::kHann, 0.375, 8, 1.0),
                  ErrorCode::kEmptySegment);
  EXPECT_BS_ERROR(PeriodogramSegment(std::vector<double>(9, 1.0), Taper::kHann, 0.375, 8, 1.0),
                  ErrorCode::kSegmentTooLong);
}

TEST(ResolveWelchTest, DefaultLayout) {
  const WelchLayout l = ResolveWelch({}, 500.0);
  EXPECT_EQ(l.window_samples, 5000u);
  EXPECT_EQ(l.segment_len, 2000u);
  EXPECT_EQ(l.hop, 1000u);
  EXPECT_EQ(l.fft_size, 2000u);
  EXPECT_EQ(l.offsets, (std::vector<std::size_t>{0, 1000, 2000, 3000}));
}

TEST(ResolveWelchTest, InvalidConfigs) {
  auto bad = [](WelchConfig c, double fs = 500.0) {
    EXPECT_BS_ERROR(ResolveWelch(c, fs), ErrorCode::kInvalidConfig);
  };
  bad({}, 0.0);
  bad({.window_len = 0.0});
  bad({.segment_count = 0});
  bad({.overlap_fraction = 1.0});
  bad({.overlap_fraction = -0.1});
  bad({.fft_size = 100});
  bad({.window_len = 0.002, .segment_count = 4});
}

TEST(WelchPsdTest, TenHertzSinusoidIsLocalisedInAlpha) {
  const double fs = 500.0;
  const Epoch e = SingleChannelEpoch(testing::Sine(5000, fs, 10.0, 3.0), fs);
  const PsdEstimate psd = WelchPsd(e, {});
  EXPECT_DOUBLE_EQ(psd.resolution(), 0.25);
  const double in_band = BandPower(psd, *StandardBand("alpha"));
  const double total = BandPower(psd, {"all", 0.5, 45.0});
  EXPECT_GE(in_band / total, 0.99);
}

TEST(WelchPsdTest, LocalisationWithTwoBinMargin) {
  const double fs = 500.0;
  for (double f0 : {6.3, 20.1, 37.77}) {
    for (Taper t : {Taper::kHamming, Taper::kHann}) {
      const Epoch e = SingleChannelEpoch(testing::Sine(5000, fs, f0, 1.0, 0.3), fs);
      WelchConfig cfg;
      cfg.taper = t;
      const PsdEstimate psd = WelchPsd(e, cfg);
      const double margin = 2.0 / 4.0;  // 2 / segment duration
      const double in_band = BandPower(psd, {"b", f0 - margin, f0 + margin});
      const double total = BandPower(psd, {"all", 0.0, fs / 2});
      EXPECT_GE(in_band / total, 0.95) << f0 << " " << ToString(t);
    }
  }
}

TEST(WelchPsdTest, IdenticalSegmentsEqualOnePeriodogram) {
  const auto seg = testing::WhiteNoise(250, 5);
  std::vector<double> x;
  for (int i = 0; i < 4; ++i) x.insert(x.end(), seg.begin(), seg.end());
  const PsdEstimate psd =
      WelchPsd(SingleChannelEpoch(x, 100.0),
               {.window_len = 10.0, .overlap_fraction = 0.0, .taper = Taper::kRectangular});
  const auto one = PeriodogramSegment(seg, Taper::kRectangular, 1.0, 250, 100.0);
  EXPECT_LT(MaxRelError(psd.power[0], one), 1e-13);
}

TEST(WelchPsdTest, ParsevalForRectangularNonOverlapping) {
  const double fs = 200.0;
  const auto x = testing::WhiteNoise(2000, 11, 4.0);
  const PsdEstimate psd =
      WelchPsd(SingleChannelEpoch(x, fs),
               {.window_len = 10.0, .overlap_fraction = 0.0, .taper = Taper::kRectangular});
  double integrated = 0.0;
  for (double v : psd.power[0]) integrated += v * psd.resolution();
  // Mean over segments of the segment mean square.
  long double mean_square = 0.0L;
  for (double v : x) mean_square += static_cast<long double>(v) * v;
  mean_square /= x.size();
  // One-sided folding counts DC and Nyquist once, so the bin sum is exact.
  EXPECT_NEAR(integrated / static_cast<double>(mean_square), 1.0, 1e-9);
}

TEST(WelchPsdTest, MatchesBruteForceOracle) {
  struct Case {
    double fs;
    WelchConfig cfg;
    const char* taper;
  };
  const Case cases[] = {
      {500.0, {}, "hamming"},
      {256.0, {.taper = Taper::kHann}, "hann"},
      {100.0, {.segment_count = 3, .overlap_fraction = 0.25, .taper = Taper::kRectangular},
       "rectangular"},
      {128.0, {.fft_size = 700}, "hamming"},
      {99.0, {.segment_count = 5, .overlap_fraction = 0.6}, "hamming"},
  };
  unsigned seed = 100;
  for (const auto& c : cases) {
    const auto n = static_cast<std::size_t>(std::round(c.fs * c.cfg.window_len));
    const auto x = testing::WhiteNoise(n, seed++, 10.0);
    const PsdEstimate psd = WelchPsd(SingleChannelEpoch(x, c.fs), c.cfg);
    const auto want = oracle::BruteForceWelch(x, c.fs, n, c.cfg.segment_count,
                                              c.cfg.overlap_fraction, c.taper,
                                              c.cfg.fft_size);
    ASSERT_EQ(psd.power[0].size(), want.size());
    EXPECT_LT(MaxRelError(psd.power[0], want), 1e-10) << c.fs;
    for (double v : psd.power[0]) EXPECT_GE(v, 0.0);
  }
}

TEST(WelchPsdTest, ScaleEquivarianceAndRatioInvariance) {
  const Recording r = SynthMini(2.0, 1.5, 10.0, 250.0, 9);
  std::vector<std::vector<double>> scaled = r.samples();
  const double k = 3.7;
  for (auto& ch : scaled) {
    for (double& v : ch) v *= k;
  }
  const Recording rk(r.channels(), scaled, r.sampling_rate());
  const PsdEstimate a = WelchPsd(WholeRecording(r), {});
  const PsdEstimate b = WelchPsd(WholeRecording(rk), {});
  for (std::size_t c = 0; c < a.power.size(); ++c) {
    std::vector<double> want(a.power[c]);
    for (double& v : want) v *= k * k;
    EXPECT_LT(MaxRelError(b.power[c], want), 1e-12);
  }
  const auto beta = *StandardBand("beta");
  const auto alpha = *StandardBand("alpha");
  EXPECT_NEAR(BandRatio(b, beta, alpha) / BandRatio(a, beta, alpha), 1.0, 1e-12);
}

TEST(WelchPsdTest, SkipsReferenceChannelsAndChecksLength) {
  const Recording r = testing::MakeRecording(
      {"Fz", "M1"}, {testing::WhiteNoise(1000, 1), testing::WhiteNoise(1000, 2)}, 100.0);
  const PsdEstimate psd = WelchPsd(WholeRecording(r), {});
  ASSERT_EQ(psd.channels.size(), 1u);
  EXPECT_EQ(psd.channels[0].label, "Fz");
  const Epoch short_epoch = SingleChannelEpoch(std::vector<double>(999, 0.0), 100.0);
  EXPECT_BS_ERROR(WelchPsd(short_epoch, {}), ErrorCode::kSegmentTooLong);
}

PsdEstimate FlatPsd(double level) {
  PsdEstimate psd;
  psd.sampling_rate = 100.0;
  for (int k = 0; k <= 200; ++k) psd.frequencies.push_back(0.25 * k);
  psd.channels = testing::DefaultChannels({"Cz", "Pz"});
  psd.power.assign(2, std::vector<double>(psd.frequencies.size(), level));
  return psd;
}

TEST(BandPowerTest, RectangleAreas) {
  EXPECT_EQ(BandPower(FlatPsd(0.0), *StandardBand("alpha")), 0.0);
  EXPECT_NEAR(BandPower(FlatPsd(1.0), *StandardBand("alpha")), 5.0, 1e-12);
  // Edges between bins are interpolated.
  EXPECT_NEAR(BandPower(FlatPsd(1.0), {"x", 8.1, 12.93}), 4.83, 1e-12);
  EXPECT_BS_ERROR(BandPower(FlatPsd(1.0), {"x", 40.0, 60.0}), ErrorCode::kBandOutOfRange);
  EXPECT_BS_ERROR(BandPower(FlatPsd(1.0), {"x", 9.0, 8.0}), ErrorCode::kBandOutOfRange);
}

TEST(BandPowerTest, ChannelSubsetAverages) {
  PsdEstimate psd = FlatPsd(1.0);
  std::fill(psd.power[1].begin(), psd.power[1].end(), 3.0);
  const auto alpha = *StandardBand("alpha");
  EXPECT_NEAR(BandPower(psd, alpha), 10.0, 1e-12);
  const std::vector<std::string> labels = {"Pz"};
  const auto idx = ResolveChannels(psd, labels);
  EXPECT_NEAR(BandPower(psd, alpha, idx), 15.0, 1e-12);
  const std::vector<std::string> bad = {"M1"};
  EXPECT_BS_ERROR(ResolveChannels(psd, bad), ErrorCode::kUnknownChannelLabel);
}

TEST(BandRatioTest, Examples) {
  EXPECT_NEAR(PowerRatio(testdata::kBaselineBetaPower, testdata::kBaselineAlphaPower), 0.7009,
              1e-4);
  EXPECT_EQ(BandRatio(FlatPsd(2.0), {"a", 10, 15}, {"b", 20, 25}), 1.0);
  EXPECT_BS_ERROR(BandRatio(FlatPsd(0.0), {"a", 10, 15}, {"b", 20, 25}),
                  ErrorCode::kZeroDenominatorPower);
  EXPECT_BS_ERROR(PowerRatio(1.0, 0.0), ErrorCode::kZeroDenominatorPower);
}

TEST(BandRatioTest, SynthesizedTwoToOne) {
  const Recording r = SynthMini(1.0, 2.0, 10.0, 250.0, 21);
  const PsdEstimate psd = WelchPsd(WholeRecording(r), {});
  EXPECT_NEAR(BandRatio(psd, *StandardBand("beta"), *StandardBand("alpha")), 2.0, 0.05);
}

TEST(BandRatioTest, SynthesizedBandPowersWithinTwoPercent) {
  const Recording r = SynthMini(testdata::kBaselineAlphaPower, testdata::kBaselineBetaPower,
                                10.0, 500.0, 4);
  const PsdEstimate psd = WelchPsd(WholeRecording(r), {});
  EXPECT_NEAR(BandPower(psd, *StandardBand("alpha")), testdata::kBaselineAlphaPower,
              0.02 * testdata::kBaselineAlphaPower);
  EXPECT_NEAR(BandPower(psd, *StandardBand("beta")), testdata::kBaselineBetaPower,
              0.02 * testdata::kBaselineBetaPower);
}

// Builds a recording whose epoch i carries the given beta power over unit
// alpha power; samples outside epochs are zero.
Recording ScriptedSession(const std::vector<double>& times,
                          const std::vector<double>& beta, double fs, double total) {
  std::vector<std::vector<double>> s(3, std::vector<double>(
                                            static_cast<std::size_t>(total * fs), 0.0));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Recording chunk = SynthMini(1.0, beta[i], 10.0, fs, 1000 + i);
    const auto first = static_cast<std::size_t>(times[i] * fs);
    for (std::size_t c = 0; c < 3; ++c) {
      std::copy(chunk.samples()[c].begin(), chunk.samples()[c].end(),
                s[c].begin() + static_cast<std::ptrdiff_t>(first));
    }
  }
  return Recording(MiniMontage().electrodes(), s, fs);
}

TEST(BarTimeseriesTest, StepFromPointSevenToOnePointFive) {
  SessionProtocol p;
  p.epoch_times = {0.0, 10.0};
  const Recording r = ScriptedSession(p.epoch_times, {0.7, 1.5}, 250.0, 20.0);
  const BarSeries s = BarTimeseries(r, p, {}, {}, {}, 0.7);
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_NEAR(s.points[0].ratio, 0.7, 0.05 * 0.7);
  EXPECT_NEAR(s.points[1].ratio, 1.5, 0.05 * 1.5);
  EXPECT_EQ(s.points[1].time, 10.0);
  EXPECT_EQ(s.baseline, 0.7);
}

TEST(BarTimeseriesTest, ConstantSpectrumGivesConstantSeries) {
  const Recording chunk = SynthMini(1.0, 1.2, 10.0, 100.0, 77);
  std::vector<std::vector<double>> s(3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (int rep = 0; rep < 3; ++rep) {
      s[c].insert(s[c].end(), chunk.samples()[c].begin(), chunk.samples()[c].end());
    }
  }
  const Recording r(chunk.channels(), s, 100.0);
  SessionProtocol p;
  p.epoch_times = {0.0, 10.0, 20.0};
  const BarSeries series = BarTimeseries(r, p, {}, {}, {}, 1.0);
  ASSERT_EQ(series.points.size(), 3u);
  EXPECT_EQ(series.points[0].ratio, series.points[1].ratio);
  EXPECT_EQ(series.points[1].ratio, series.points[2].ratio);
}

TEST(BarTimeseriesTest, StrategicGamerScriptedSession) {
  const auto& row = testdata::kDuring[4];
  ASSERT_STREQ(row.game, "strategic");
  SessionProtocol p = SessionProtocol::Defaults(Phase::kDuringGameplay);
  p.game_type = GameType::kStrategic;
  const std::vector<double> beta(row.ratio.begin(), row.ratio.end());
  const Recording r = ScriptedSession(p.epoch_times, beta, 100.0, 3610.0);
  const BarSeries s = BarTimeseries(r, p, {}, {}, {}, testdata::kBaselineRatio);
  ASSERT_EQ(s.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.points[i].ratio, row.ratio[i], 0.05 * row.ratio[i]) << i;
    EXPECT_EQ(s.points[i].time, p.epoch_times[i]);
  }
  const std::string csv = BarSeriesToCsv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time_s,bar,phase,game_type,gamer_type,music_type");
  EXPECT_NE(csv.find("\n900,"), std::string::npos);
  EXPECT_NE(csv.find(",during_gameplay,strategic,gamer,none\n"), std::string::npos);
}

TEST(BarTimeseriesTest, PropagatesErrors) {
  const Recording r = SynthMini(1.0, 1.0, 10.0, 100.0, 1);
  SessionProtocol p;
  p.epoch_times = {5.0};
  EXPECT_BS_ERROR(BarTimeseries(r, p, {}, {}, {}, 1.0), ErrorCode::kEpochOutOfRange);
  p.epoch_times = {0.0};
  const std::vector<std::string> labels = {"Oz"};
  EXPECT_BS_ERROR(BarTimeseries(r, p, {}, {}, labels, 1.0), ErrorCode::kUnknownChannelLabel);
  const Recording silent(r.channels(), std::vector<std::vector<double>>(
                                          3, std::vector<double>(1000, 0.0)),
                         100.0);
  EXPECT_BS_ERROR(BarTimeseries(silent, p, {}, {}, {}, 1.0),
                  ErrorCode::kZeroDenominatorPower);
}

TEST(RelativeIncreaseTest, Examples) {
  EXPECT_NEAR(RelativeIncrease(0.729, 0.701), 0.0384, 5e-5);
  EXPECT_EQ(RelativeIncrease(1.3, 1.3), 0.0);
  EXPECT_NEAR(RelativeIncrease(2.403, 0.701), 0.7083, 5e-5);
  EXPECT_BS_ERROR(RelativeIncrease(0.0, 0.7), ErrorCode::kNonPositiveCurrent);
  EXPECT_BS_ERROR(RelativeIncrease(-1.0, 0.7), ErrorCode::kNonPositiveCurrent);
}

TEST(RelativeIncreaseTest, ReproducesPublishedIncreases) {
  for (const auto& row : testdata::kDuring) {
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(RelativeIncrease(row.ratio[i], testdata::kBaselineRatio), row.increase[i],
                  5e-4)
          << row.game << "/" << row.gamer << " " << i;
    }
  }
}

TEST(RelativeIncreaseTest, MonotoneInCurrent) {
  double prev = -INFINITY;
  for (double c = 0.05; c < 5.0; c += 0.05) {
    const double v = RelativeIncrease(c, 0.701);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

}  // namespace
}  // namespace barstress
