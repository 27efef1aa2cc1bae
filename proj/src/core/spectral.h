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

// Welch power spectral density, band power and rhythm power ratios.
//
// A window of W samples is split into L segments of length
//   M = floor(W / (1 + (L - 1) * (1 - overlap)))
// advanced by hop = floor(M * (1 - overlap)); trailing samples are dropped.
// Each segment d gives a modified periodogram
//   P_d(f) = |DFT(x_d * w)|^2 / (M * U),   U = (1/M) * sum |w(n)|^2,
// folded to one side (interior bins doubled) and divided by the sampling
// rate, so units are uV^2/Hz. The Welch estimate is the mean of the P_d.

#ifndef BARSTRESS_CORE_SPECTRAL_H_
#define BARSTRESS_CORE_SPECTRAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/signal.h"

namespace barstress {

enum class Taper { kHamming, kHann, kRectangular };

std::string_view ToString(Taper taper);
Taper ParseTaper(std::string_view s);

// Periodic (DFT-even) taper of length m.
std::vector<double> TaperWindow(Taper taper, std::size_t m);

// U = (1/M) * sum w(n)^2.
double WindowPowerNorm(Taper taper, std::size_t m);

struct WelchConfig {
  double window_len = 10.0;  // seconds
  int segment_count = 4;
  double overlap_fraction = 0.5;
  Taper taper = Taper::kHamming;
  std::size_t fft_size = 0;  // 0 selects the segment length
};

// Segmentation of one window, resolved for a sampling rate.
struct WelchLayout {
  std::size_t window_samples = 0;
  std::size_t segment_len = 0;
  std::size_t hop = 0;
  std::size_t fft_size = 0;
  std::vector<std::size_t> offsets;
};

// Throws kInvalidConfig for inconsistent parameters.
WelchLayout ResolveWelch(const WelchConfig& config, double sampling_rate);

// One-sided density spectrum of a single segment (fft_size / 2 + 1 bins).
// Throws kEmptySegment for an empty segment and kSegmentTooLong when the
// segment exceeds fft_size.
std::vector<double> PeriodogramSegment(std::span<const double> segment, Taper taper,
                                       double window_norm, std::size_t fft_size,
                                       double sampling_rate);

// Welch estimate of a single channel. The input must hold at least
// layout.window_samples values; extra samples are ignored.
std::vector<double> WelchChannel(std::span<const double> samples, double sampling_rate,
                                 const WelchConfig& config);

struct PsdEstimate {
  std::vector<double> frequencies;    // Hz, spacing fs / fft_size
  std::vector<ChannelInfo> channels;  // EEG channels only
  std::vector<std::vector<double>> power;  // [channel][bin], uV^2/Hz
  WelchConfig config;
  double sampling_rate = 0.0;

  double resolution() const {
    return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0;
  }
};

// Reference channels are skipped. Throws kSegmentTooLong when the epoch is
// shorter than the configured window.
PsdEstimate WelchPsd(const Epoch& epoch, const WelchConfig& config);

// Trapezoidal integral of one channel's PSD over [f_low, f_high], with the
// PSD linearly interpolated at band edges that fall between bins.
double ChannelBandPower(const PsdEstimate& psd, std::size_t channel,
                        const BandDefinition& band);

// Channel-averaged band power. An empty subset means all channels.
double BandPower(const PsdEstimate& psd, const BandDefinition& band,
                 std::span<const std::size_t> channels = {});

// numerator / denominator; throws kZeroDenominatorPower when the
// denominator is not positive.
double PowerRatio(double numerator_power, double denominator_power);

double BandRatio(const PsdEstimate& psd, const BandDefinition& numerator,
                 const BandDefinition& denominator,
                 std::span<const std::size_t> channels = {});

// Indices into psd.channels for the given labels (empty -> empty).
std::vector<std::size_t> ResolveChannels(const PsdEstimate& psd,
                                         std::span<const std::string> labels);

struct BarPoint {
  double time = 0.0;   // seconds from phase start
  double ratio = 0.0;  // dimensionless
};

struct BarSeries {
  std::vector<BarPoint> points;
  SessionProtocol protocol;
  double baseline = 0.0;
};

struct RatioBands {
  BandDefinition numerator = *StandardBand("beta");
  BandDefinition denominator = *StandardBand("alpha");
};

// One ratio per protocol epoch; `channels` selects a label subset (empty =
// all EEG channels). `baseline` is carried through unchanged.
BarSeries BarTimeseries(const Recording& recording, const SessionProtocol& protocol,
                        const WelchConfig& config, const RatioBands& bands,
                        std::span<const std::string> channels, double baseline);

// (current - baseline) / current. Throws kNonPositiveCurrent if current <= 0.
double RelativeIncrease(double current, double baseline);

// CSV with columns time_s,bar,phase,game_type,gamer_type,music_type.
std::string BarSeriesToCsv(const BarSeries& series);

}  // namespace barstress

#endif  // BARSTRESS_CORE_SPECTRAL_H_
