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

#ifndef BARSTRESS_TESTS_UNIT_TEST_UTIL_H_
#define BARSTRESS_TESTS_UNIT_TEST_UTIL_H_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "core/error.h"
#include "core/signal.h"
#include "gtest/gtest.h"

namespace barstress::testing {

// Expects `stmt` to throw barstress::Error with `code`.
#define EXPECT_BS_ERROR(stmt, expected_code)                                   \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "expected " << ::barstress::ErrorCodeName(expected_code) \
                    << ", nothing thrown";                                     \
    } catch (const ::barstress::Error& e) {                                    \
      EXPECT_EQ(e.code(), expected_code) << e.what();                          \
    }                                                                          \
  } while (0)

// Channel info for the named default-montage electrodes.
inline std::vector<ChannelInfo> DefaultChannels(const std::vector<std::string>& labels) {
  std::vector<ChannelInfo> out;
  for (const auto& l : labels) {
    out.push_back(Montage::Default().electrodes().at(*Montage::Default().Find(l)));
  }
  return out;
}

inline Recording MakeRecording(const std::vector<std::string>& labels,
                               std::vector<std::vector<double>> samples, double fs) {
  return Recording(DefaultChannels(labels), std::move(samples), fs);
}

// Three midline electrodes; keeps multi-minute recordings small.
inline const Montage& MiniMontage() {
  static const Montage m("mini", {{"Fz", {0.0, 0.4}, ChannelKind::kEeg},
                                  {"Cz", {0.0, 0.0}, ChannelKind::kEeg},
                                  {"Pz", {0.0, -0.4}, ChannelKind::kEeg}});
  return m;
}

inline std::vector<double> WhiteNoise(std::size_t n, unsigned seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline std::vector<double> Sine(std::size_t n, double fs, double f, double amplitude = 1.0,
                                double phase = 0.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = amplitude * std::sin(2.0 * M_PI * f * static_cast<double>(i) / fs + phase);
  }
  return v;
}

}  // namespace barstress::testing

#endif  // BARSTRESS_TESTS_UNIT_TEST_UTIL_H_
