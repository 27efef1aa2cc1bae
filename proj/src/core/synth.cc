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

#include "core/synth.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "core/error.h"

namespace barstress {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr double kCombSpacing = 1.0;  // Hz
constexpr std::size_t kReanchor = 4096;

// Adds amplitude * cos(2 pi f t + phase) using a rotating phasor that is
// re-anchored periodically to bound rounding drift.
void AddTone(std::vector<double>& out, double freq, double amplitude, double phase,
             double fs) {
  const double omega = 2.0 * std::numbers::pi * freq / fs;
  const std::complex<double> step = std::polar(1.0, omega);
  std::complex<double> z;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i % kReanchor == 0) z = std::polar(amplitude, omega * static_cast<double>(i) + phase);
    out[i] += z.real();
    z *= step;
  }
}

}  // namespace

std::vector<double> BandComb(const BandDefinition& band) {
  const double width = band.f_high - band.f_low;
  if (!(width > 0.0)) Fail(ErrorCode::kBandOutOfRange, "band '" + band.name + "' is empty");
  const double spacing = std::min(kCombSpacing, width);
  const auto count = static_cast<std::size_t>(std::floor(width / spacing + 1e-9));
  const double first = band.f_low + 0.5 * (width - static_cast<double>(count) * spacing) +
                       0.5 * spacing;
  std::vector<double> freqs;
  for (std::size_t k = 0; k < count; ++k) freqs.push_back(first + k * spacing);
  return freqs;
}

Recording SynthEeg(const SynthSpec& spec) {
  if (!(spec.duration > 0.0) || !std::isfinite(spec.duration)) {
    Fail(ErrorCode::kInvalidArgument, "duration must be positive");
  }
  if (!(spec.sampling_rate > 0.0) || !std::isfinite(spec.sampling_rate)) {
    Fail(ErrorCode::kInvalidArgument, "sampling rate must be positive");
  }
  if (!(spec.noise_floor >= 0.0)) Fail(ErrorCode::kInvalidArgument, "noise floor < 0");
  const double nyquist = spec.sampling_rate / 2.0;
  for (const auto& t : spec.targets) {
    if (t.band.f_high > nyquist) {
      Fail(ErrorCode::kBandAboveNyquist,
           "band '" + t.band.name + "' ends above " + std::to_string(nyquist) + " Hz");
    }
    t.band.Validate(nyquist);
    if (!(t.power >= 0.0)) Fail(ErrorCode::kInvalidArgument, "negative band power");
  }
  for (const auto& ct : spec.channel_targets) {
    if (!spec.montage.Find(ct.label)) {
      Fail(ErrorCode::kUnknownChannelLabel, "override for unknown electrode '" + ct.label + "'");
    }
    bool known = false;
    for (const auto& t : spec.targets) known = known || t.band.name == ct.band;
    if (!known) Fail(ErrorCode::kInvalidArgument, "override for unknown band '" + ct.band + "'");
    if (!(ct.power >= 0.0)) Fail(ErrorCode::kInvalidArgument, "negative band power");
  }

  const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.sampling_rate));
  const double noise_sigma = std::sqrt(spec.noise_floor * nyquist);
  const auto& electrodes = spec.montage.electrodes();
  std::vector<std::vector<double>> samples(electrodes.size());

  for (std::size_t ch = 0; ch < electrodes.size(); ++ch) {
    std::mt19937_64 rng(SplitMix64(spec.seed ^ SplitMix64(ch)));
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    std::vector<double>& x = samples[ch];
    x.assign(n, 0.0);
    for (const auto& target : spec.targets) {
      double power = target.power;
      for (const auto& ct : spec.channel_targets) {
        if (ct.label == electrodes[ch].label && ct.band == target.band.name) power = ct.power;
      }
      const auto comb = BandComb(target.band);
      const double amplitude = std::sqrt(2.0 * power / static_cast<double>(comb.size()));
      for (double f : comb) {
        // Draw the phase even for silent bands so seeds stay aligned.
        const double phase = phase_dist(rng);
        if (amplitude > 0.0) AddTone(x, f, amplitude, phase, spec.sampling_rate);
      }
    }
    if (noise_sigma > 0.0) {
      std::normal_distribution<double> noise(0.0, noise_sigma);
      for (double& v : x) v += noise(rng);
    }
  }
  return Recording(electrodes, std::move(samples), spec.sampling_rate);
}

std::vector<DataPoint> SynthBarTrajectory(const TrajectorySpec& spec) {
  if (!(spec.sigma >= 0.0)) Fail(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  for (std::size_t i = 1; i < spec.times.size(); ++i) {
    if (!(spec.times[i] > spec.times[i - 1])) {
      Fail(ErrorCode::kInvalidArgument, "sample times must be strictly increasing");
    }
  }
  std::mt19937_64 rng(SplitMix64(spec.seed));
  std::normal_distribution<double> noise(0.0, spec.sigma > 0.0 ? spec.sigma : 1.0);
  std::vector<DataPoint> out;
  for (double t : spec.times) {
    double y = std::holds_alternative<FourPLModel>(spec.model)
                   ? Eval4pl(std::get<FourPLModel>(spec.model), t)
                   : EvalQuartic(std::get<QuarticModel>(spec.model), t);
    if (spec.sigma > 0.0) y += noise(rng);
    out.push_back({t, y});
  }
  return out;
}

}  // namespace barstress
