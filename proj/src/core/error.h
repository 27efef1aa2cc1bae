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

#ifndef BARSTRESS_CORE_ERROR_H_
#define BARSTRESS_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace barstress {

// Every failure the core can report. The numeric values are mirrored by
// bs_status in the public C header and must stay in sync with it.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  // signal-core
  kEpochOutOfRange = 10,
  kEmptyProtocol = 11,
  kNonFiniteSample = 12,
  kDuplicateChannelLabel = 13,
  kInvalidMontage = 14,
  // ingest
  kMalformedRow = 20,
  kNonNumericSample = 21,
  kUnknownChannelLabel = 22,
  kBadMagic = 23,
  kTruncatedHeader = 24,
  kTruncatedData = 25,
  kInvalidHeader = 26,
  kMixedSamplingRates = 27,
  kDigitalRangeDegenerate = 28,
  // spectral
  kEmptySegment = 30,
  kSegmentTooLong = 31,
  kInvalidConfig = 32,
  kBandOutOfRange = 33,
  kZeroDenominatorPower = 34,
  kNonPositiveCurrent = 35,
  // topo
  kLengthMismatch = 40,
  kZeroVector = 41,
  kDegenerateRange = 42,
  // regress
  kUndefinedAtZero = 50,
  kTooFewPoints = 51,
  kDegenerateX = 52,
  kZeroTotalVariance = 53,
  kNonPositiveRss = 54,
  kMismatchedData = 55,
  // synth
  kBandAboveNyquist = 60,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace barstress

#endif  // BARSTRESS_CORE_ERROR_H_
