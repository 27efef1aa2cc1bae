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

#include <fftw3.h>

#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>

#include "core/error.h"

namespace barstress {

namespace {

// FFTW planning is not thread safe; execution on distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  double* input() { return in_; }
  const fftw_complex* output() const { return out_; }
  void Execute() { fftw_execute(plan_); }

 private:
  std::size_t n_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// Accumulates one-sided density periodograms of equally long segments.
class PeriodogramAccumulator {
 public:
  PeriodogramAccumulator(Taper taper, std::size_t segment_len, double window_norm,
                         std::size_t fft_size, double sampling_rate)
      : window_(TaperWindow(taper, segment_len)),
        fft_(fft_size),
        scale_(1.0 / (static_cast<double>(segment_len) * window_norm * sampling_rate)),
        sum_(fft_size / 2 + 1, 0.0) {}

  void Add(std::span<const double> segment) {
    const std::size_t m = window_.size();
    const std::size_t n = fft_.size();
    double* in = fft_.input();
    for (std::size_t i = 0; i < m; ++i) in[i] = segment[i] * window_[i];
    for (std::size_t i = m; i < n; ++i) in[i] = 0.0;
    fft_.Execute();
    const fftw_complex* out = fft_.output();
    const std::size_t bins = n / 2 + 1;
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
      // DC and (for even n) Nyquist have no mirror image.
      const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
      sum_[k] += (single ? 1.0 : 2.0) * mag2 * scale_;
    }
    ++count_;
  }

  std::vector<double> Mean() const {
    std::vector<double> out(sum_);
    if (count_ > 0) {
      for (double& v : out) v /= static_cast<double>(count_);
    }
    return out;
  }

 private:
  std::vector<double> window_;
  RealFft fft_;
  double scale_;
  std::vector<double> sum_;
  std::size_t count_ = 0;
};

void CheckSamplingRate(double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    Fail(ErrorCode::kInvalidConfig, "sampling rate must be positive");
  }
}

}  // namespace

std::string_view ToString(Taper taper) {
  switch (taper) {
    case Taper::kHamming: return "hamming";
    case Taper::kHann: return "hann";
    case Taper::kRectangular: return "rectangular";
  }
  return "hamming";
}

Taper ParseTaper(std::string_view s) {
  if (s == "hamming") return Taper::kHamming;
  if (s == "hann") return Taper::kHann;
  if (s == "rectangular") return Taper::kRectangular;
  Fail(ErrorCode::kInvalidConfig, "unknown taper '" + std::string(s) + "'");
}

std::vector<double> TaperWindow(Taper taper, std::size_t m) {
  std::vector<double> w(m, 1.0);
  if (taper == Taper::kRectangular) return w;
  const double a0 = taper == Taper::kHamming ? 0.54 : 0.5;
  const double a1 = 1.0 - a0;
  for (std::size_t n = 0; n < m; ++n) {
    w[n] = a0 - a1 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                              static_cast<double>(m));
  }
  return w;
}

double WindowPowerNorm(Taper taper, std::size_t m) {
  if (m == 0) Fail(ErrorCode::kInvalidArgument, "window length must be >= 1");
  double sum = 0.0;
  for (double v : TaperWindow(taper, m)) sum += v * v;
  return sum / static_cast<double>(m);
}

WelchLayout ResolveWelch(const WelchConfig& config, double sampling_rate) {
  CheckSamplingRate(sampling_rate);
  if (!(config.window_len > 0.0) || !std::isfinite(config.window_len)) {
    Fail(ErrorCode::kInvalidConfig, "window length must be positive");
  }
  if (config.segment_count < 1) {
    Fail(ErrorCode::kInvalidConfig, "segment count must be >= 1");
  }
  if (!(config.overlap_fraction >= 0.0 && config.overlap_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidConfig, "overlap fraction must lie in [0, 1)");
  }
  WelchLayout layout;
  layout.window_samples =
      static_cast<std::size_t>(std::llround(config.window_len * sampling_rate));
  const double step = 1.0 - config.overlap_fraction;
  const double exact_len = static_cast<double>(layout.window_samples) /
                           (1.0 + (config.segment_count - 1) * step);
  // Tiny slack so values like 1999.9999999 from rounding noise floor to 2000.
  layout.segment_len = static_cast<std::size_t>(std::floor(exact_len + 1e-9));
  if (layout.segment_len < 1) {
    Fail(ErrorCode::kInvalidConfig, "window too short for the segment count");
  }
  layout.hop = static_cast<std::size_t>(
      std::floor(static_cast<double>(layout.segment_len) * step + 1e-9));
  if (layout.hop == 0 && config.segment_count > 1) {
    Fail(ErrorCode::kInvalidConfig, "overlap leaves a zero hop");
  }
  layout.fft_size = config.fft_size == 0 ? layout.segment_len : config.fft_size;
  if (layout.fft_size < layout.segment_len) {
    Fail(ErrorCode::kInvalidConfig, "fft size smaller than the segment length");
  }
  for (int d = 0; d < config.segment_count; ++d) {
    layout.offsets.push_back(static_cast<std::size_t>(d) * layout.hop);
  }
  return layout;
}

std::vector<double> PeriodogramSegment(std::span<const double> segment, Taper taper,
                                       double window_norm, std::size_t fft_size,
                                       double sampling_rate) {
  if (segment.empty()) Fail(ErrorCode::kEmptySegment, "segment has no samples");
  if (segment.size() > fft_size) {
    Fail(ErrorCode::kSegmentTooLong, "segment longer than the FFT size");
  }
  if (!(window_norm > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "window power norm must be positive");
  }
  CheckSamplingRate(sampling_rate);
  PeriodogramAccumulator acc(taper, segment.size(), window_norm, fft_size,
                             sampling_rate);
  acc.Add(segment);
  return acc.Mean();
}

std::vector<double> WelchChannel(std::span<const double> samples, double sampling_rate,
                                 const WelchConfig& config) {
  const WelchLayout layout = ResolveWelch(config, sampling_rate);
  if (samples.size() < layout.window_samples) {
    Fail(ErrorCode::kSegmentTooLong,
         "window needs " + std::to_string(layout.window_samples) + " samples, got " +
             std::to_string(samples.size()));
  }
  PeriodogramAccumulator acc(config.taper, layout.segment_len,
                             WindowPowerNorm(config.taper, layout.segment_len),
                             layout.fft_size, sampling_rate);
  for (std::size_t offset : layout.offsets) {
    acc.Add(samples.subspan(offset, layout.segment_len));
  }
  return acc.Mean();
}

PsdEstimate WelchPsd(const Epoch& epoch, const WelchConfig& config) {
  const WelchLayout layout = ResolveWelch(config, epoch.sampling_rate);
  if (epoch.sample_count() < layout.window_samples) {
    Fail(ErrorCode::kSegmentTooLong,
         "epoch has " + std::to_string(epoch.sample_count()) + " samples, window needs " +
             std::to_string(layout.window_samples));
  }
  PsdEstimate psd;
  psd.config = config;
  psd.sampling_rate = epoch.sampling_rate;
  const std::size_t bins = layout.fft_size / 2 + 1;
  psd.frequencies.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    psd.frequencies[k] =
        static_cast<double>(k) * epoch.sampling_rate / static_cast<double>(layout.fft_size);
  }
  const double norm = WindowPowerNorm(config.taper, layout.segment_len);
  for (std::size_t c = 0; c < epoch.channels.size(); ++c) {
    if (epoch.channels[c].kind != ChannelKind::kEeg) continue;
    PeriodogramAccumulator acc(config.taper, layout.segment_len, norm, layout.fft_size,
                               epoch.sampling_rate);
    const std::span<const double> x(epoch.samples[c]);
    for (std::size_t offset : layout.offsets) {
      acc.Add(x.subspan(offset, layout.segment_len));
    }
    psd.channels.push_back(epoch.channels[c]);
    psd.power.push_back(acc.Mean());
  }
  return psd;
}

double ChannelBandPower(const PsdEstimate& psd, std::size_t channel,
                        const BandDefinition& band) {
  band.Validate(psd.sampling_rate / 2.0);
  const auto& f = psd.frequencies;
  const auto& p = psd.power.at(channel);
  if (f.size() < 2) Fail(ErrorCode::kBandOutOfRange, "PSD has fewer than two bins");
  auto interp = [&](std::size_t k, double x) {
    const double t = (x - f[k]) / (f[k + 1] - f[k]);
    return p[k] + t * (p[k + 1] - p[k]);
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const double lo = std::max(f[k], band.f_low);
    const double hi = std::min(f[k + 1], band.f_high);
    if (hi <= lo) continue;
    total += 0.5 * (interp(k, lo) + interp(k, hi)) * (hi - lo);
  }
  return total;
}

double BandPower(const PsdEstimate& psd, const BandDefinition& band,
                 std::span<const std::size_t> channels) {
  if (psd.power.empty()) Fail(ErrorCode::kInvalidArgument, "PSD has no channels");
  double sum = 0.0;
  if (channels.empty()) {
    for (std::size_t c = 0; c < psd.power.size(); ++c) sum += ChannelBandPower(psd, c, band);
    return sum / static_cast<double>(psd.power.size());
  }
  for (std::size_t c : channels) {
    if (c >= psd.power.size()) Fail(ErrorCode::kInvalidArgument, "channel index out of range");
    sum += ChannelBandPower(psd, c, band);
  }
  return sum / static_cast<double>(channels.size());
}

double PowerRatio(double numerator_power, double denominator_power) {
  if (!(denominator_power > 0.0)) {
    Fail(ErrorCode::kZeroDenominatorPower, "denominator band power is not positive");
  }
  return numerator_power / denominator_power;
}

double BandRatio(const PsdEstimate& psd, const BandDefinition& numerator,
                 const BandDefinition& denominator, std::span<const std::size_t> channels) {
  return PowerRatio(BandPower(psd, numerator, channels),
                    BandPower(psd, denominator, channels));
}

std::vector<std::size_t> ResolveChannels(const PsdEstimate& psd,
                                         std::span<const std::string> labels) {
  std::vector<std::size_t> out;
  for (const auto& label : labels) {
    bool found = false;
    for (std::size_t c = 0; c < psd.channels.size(); ++c) {
      if (psd.channels[c].label == label) {
        out.push_back(c);
        found = true;
        break;
      }
    }
    if (!found) {
      Fail(ErrorCode::kUnknownChannelLabel, "no EEG channel '" + label + "'");
    }
  }
  return out;
}

BarSeries BarTimeseries(const Recording& recording, const SessionProtocol& protocol,
                        const WelchConfig& config, const RatioBands& bands,
                        std::span<const std::string> channels, double baseline) {
  const auto epochs = SliceEpochs(recording, protocol, config.window_len);
  BarSeries series;
  series.protocol = protocol;
  series.baseline = baseline;
  for (const auto& epoch : epochs) {
    const PsdEstimate psd = WelchPsd(epoch, config);
    const auto subset = ResolveChannels(psd, channels);
    const double ratio = BandRatio(psd, bands.numerator, bands.denominator, subset);
    if (!(ratio > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "numerator band has no power at t=" + std::to_string(epoch.t_start) + " s");
    }
    series.points.push_back({epoch.t_start, ratio});
  }
  return series;
}

double RelativeIncrease(double current, double baseline) {
  if (!(current > 0.0)) {
    Fail(ErrorCode::kNonPositiveCurrent, "current ratio must be positive");
  }
  return (current - baseline) / current;
}

std::string BarSeriesToCsv(const BarSeries& series) {
  auto num = [](double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  std::string out = "time_s,bar,phase,game_type,gamer_type,music_type\n";
  for (const auto& p : series.points) {
    out += num(p.time) + ',' + num(p.ratio) + ',';
    out += std::string(ToString(series.protocol.phase)) + ',';
    out += std::string(ToString(series.protocol.game_type)) + ',';
    out += std::string(ToString(series.protocol.gamer_type)) + ',';
    out += std::string(ToString(series.protocol.music_type)) + '\n';
  }
  return out;
}

}  // namespace barstress
