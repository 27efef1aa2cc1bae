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

// Synthetic EEG and ratio trajectories with known ground truth.
//
// Each band is rendered as a comb of random-phase sinusoids spaced 1 Hz
// apart and centred inside the band, all with equal amplitude, so the
// band's integrated power equals its target. White Gaussian noise with a
// one-sided density of noise_floor is added on top.

#ifndef BARSTRESS_CORE_SYNTH_H_
#define BARSTRESS_CORE_SYNTH_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "core/regress.h"
#include "core/signal.h"

namespace barstress {

// Recorded in output metadata so runs can be reproduced.
inline constexpr const char* kSynthGeneratorName =
    "mt19937_64 seeded per channel via splitmix64; std::normal_distribution";

struct BandTarget {
  BandDefinition band;
  double power = 0.0;  // uV^2
};

struct ChannelTarget {
  std::string label;
  std::string band;  // name of a band in SynthSpec::targets
  double power = 0.0;
};

struct SynthSpec {
  double duration = 10.0;  // seconds
  double sampling_rate = 500.0;
  Montage montage = Montage::Default();
  std::vector<BandTarget> targets;
  // Per-electrode overrides of a band's power.
  std::vector<ChannelTarget> channel_targets;
  double noise_floor = 0.0;  // uV^2/Hz, one-sided
  std::uint64_t seed = 0;
};

// Oscillator frequencies used for a band.
std::vector<double> BandComb(const BandDefinition& band);

// One channel per montage electrode. Throws kBandAboveNyquist,
// kInvalidArgument (duration <= 0, negative power), kUnknownChannelLabel.
Recording SynthEeg(const SynthSpec& spec);

struct TrajectorySpec {
  std::variant<FourPLModel, QuarticModel> model;
  std::vector<double> times;  // minutes, strictly increasing
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// y = model(x) + N(0, sigma^2).
std::vector<DataPoint> SynthBarTrajectory(const TrajectorySpec& spec);

}  // namespace barstress

#endif  // BARSTRESS_CORE_SYNTH_H_
