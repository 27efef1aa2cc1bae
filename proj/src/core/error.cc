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

#include "core/error.h"

namespace barstress {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kEpochOutOfRange: return "EpochOutOfRange";
    case ErrorCode::kEmptyProtocol: return "EmptyProtocol";
    case ErrorCode::kNonFiniteSample: return "NonFiniteSample";
    case ErrorCode::kDuplicateChannelLabel: return "DuplicateChannelLabel";
    case ErrorCode::kInvalidMontage: return "InvalidMontage";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kNonNumericSample: return "NonNumericSample";
    case ErrorCode::kUnknownChannelLabel: return "UnknownChannelLabel";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedHeader: return "TruncatedHeader";
    case ErrorCode::kTruncatedData: return "TruncatedData";
    case ErrorCode::kInvalidHeader: return "InvalidHeader";
    case ErrorCode::kMixedSamplingRates: return "MixedSamplingRates";
    case ErrorCode::kDigitalRangeDegenerate: return "DigitalRangeDegenerate";
    case ErrorCode::kEmptySegment: return "EmptySegment";
    case ErrorCode::kSegmentTooLong: return "SegmentTooLong";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kBandOutOfRange: return "BandOutOfRange";
    case ErrorCode::kZeroDenominatorPower: return "ZeroDenominatorPower";
    case ErrorCode::kNonPositiveCurrent: return "NonPositiveCurrent";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kUndefinedAtZero: return "UndefinedAtZero";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kDegenerateX: return "DegenerateX";
    case ErrorCode::kZeroTotalVariance: return "ZeroTotalVariance";
    case ErrorCode::kNonPositiveRss: return "NonPositiveRss";
    case ErrorCode::kMismatchedData: return "MismatchedData";
    case ErrorCode::kBandAboveNyquist: return "BandAboveNyquist";
  }
  return "Unknown";
}

}  // namespace barstress
