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

// Recording ingest: CSV text and a minimal EDF subset.
//
// Parsers are pure functions over byte buffers. Every failure is reported as
// a barstress::Error with a typed code; no input makes them crash.

#ifndef BARSTRESS_CORE_INGEST_H_
#define BARSTRESS_CORE_INGEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/signal.h"

namespace barstress {

struct CsvLayout {
  char delimiter = ',';
  bool has_header = true;
  // Column holding timestamps. It is checked for strict monotonicity and
  // otherwise ignored; the sampling rate is authoritative.
  std::optional<std::size_t> time_column;
};

// Columns are matched to montage labels through the header. Without a header
// the column count must equal the montage's EEG electrode count (EEG
// electrodes in montage order) or its total electrode count.
// The resulting channels follow montage order.
Recording ReadCsv(std::string_view bytes, const CsvLayout& layout,
                  double sampling_rate, const Montage& montage);

// Shortest round-trip decimal text, so ReadCsv(WriteCsv(r)) == r exactly.
std::string WriteCsv(const Recording& recording, const CsvLayout& layout);

struct EdfSignalHeader {
  std::string label;
  std::string transducer;
  std::string unit;
  double physical_min = 0.0;
  double physical_max = 0.0;
  int digital_min = 0;
  int digital_max = 0;
  std::string prefilter;
  int samples_per_record = 0;
};

struct EdfHeader {
  std::string version;
  std::string patient;
  std::string recording;
  std::string start_date;  // dd.mm.yy
  std::string start_time;  // hh.mm.ss
  int header_bytes = 0;
  long record_count = 0;
  double record_duration = 0.0;  // seconds
  int signal_count = 0;
  std::vector<EdfSignalHeader> signals;

  double sampling_rate() const {
    return signals.empty() ? 0.0 : signals.front().samples_per_record / record_duration;
  }
};

inline constexpr std::size_t kEdfFixedHeaderBytes = 256;
inline constexpr std::size_t kEdfSignalHeaderBytes = 256;

// Validates and decodes the fixed header plus per-signal blocks.
EdfHeader ParseEdfHeader(std::string_view bytes);

// Digital values are mapped to physical units with
//   phys_min + (d - dig_min) * (phys_max - phys_min) / (dig_max - dig_min).
Recording ReadEdf(std::string_view bytes, const Montage& montage);

// 16-bit EDF with per-channel physical range set to the data range. The
// round trip loses at most half a digital quantum per sample.
std::string WriteEdf(const Recording& recording);

// Size of one digital step for a channel written by WriteEdf.
double EdfQuantum(const EdfSignalHeader& signal);

}  // namespace barstress

#endif  // BARSTRESS_CORE_INGEST_H_
