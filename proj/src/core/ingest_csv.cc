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

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "core/error.h"
#include "core/ingest.h"

namespace barstress {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitLines(std::string_view bytes) {
  if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);
  std::vector<std::string_view> lines;
  while (!bytes.empty()) {
    const auto nl = bytes.find('\n');
    std::string_view line = bytes.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    bytes.remove_prefix(nl + 1);
  }
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto pos = line.find(delimiter);
    fields.push_back(Trim(line.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return fields;
}

double ParseSample(std::string_view field, std::size_t row) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    Fail(ErrorCode::kNonNumericSample,
         "row " + std::to_string(row) + ": '" + std::string(field.substr(0, 32)) + "'");
  }
  if (!std::isfinite(value)) {
    Fail(ErrorCode::kNonFiniteSample, "row " + std::to_string(row));
  }
  return value;
}

void ValidateLayout(const CsvLayout& layout) {
  const auto d = static_cast<unsigned char>(layout.delimiter);
  if (!std::isprint(d) || std::isalnum(d) || d == '.' || d == '-' || d == '+' ||
      d == '"') {
    if (d != '\t') {
      Fail(ErrorCode::kInvalidArgument, "unsupported CSV delimiter");
    }
  }
}

}  // namespace

Recording ReadCsv(std::string_view bytes, const CsvLayout& layout,
                  double sampling_rate, const Montage& montage) {
  ValidateLayout(layout);
  const auto lines = SplitLines(bytes);

  // Column -> montage electrode index, or npos for the time column.
  constexpr std::size_t kTime = static_cast<std::size_t>(-1);
  std::vector<std::size_t> column_electrode;
  std::size_t first_data = 0;

  if (layout.has_header) {
    if (lines.empty()) {
      Fail(ErrorCode::kMalformedRow, "missing header row");
    }
    const auto labels = SplitFields(lines.front(), layout.delimiter);
    for (std::size_t col = 0; col < labels.size(); ++col) {
      if (layout.time_column && *layout.time_column == col) {
        column_electrode.push_back(kTime);
        continue;
      }
      const auto idx = montage.Find(labels[col]);
      if (!idx) {
        Fail(ErrorCode::kUnknownChannelLabel,
             "column " + std::to_string(col) + " '" +
                 std::string(labels[col].substr(0, 32)) + "' not in montage '" +
                 montage.name() + "'");
      }
      column_electrode.push_back(*idx);
    }
    first_data = 1;
  } else {
    if (lines.empty()) {
      Fail(ErrorCode::kMalformedRow, "empty file without header");
    }
    const std::size_t fields = SplitFields(lines.front(), layout.delimiter).size();
    const std::size_t has_time = layout.time_column ? 1 : 0;
    const std::size_t data_cols = fields >= has_time ? fields - has_time : 0;
    const bool eeg_only = data_cols == montage.EegCount();
    if (!eeg_only && data_cols != montage.electrodes().size()) {
      Fail(ErrorCode::kMalformedRow,
           "headerless file has " + std::to_string(data_cols) +
               " data columns, montage expects " +
               std::to_string(montage.EegCount()) + " or " +
               std::to_string(montage.electrodes().size()));
    }
    std::size_t next = 0;
    for (std::size_t col = 0; col < fields; ++col) {
      if (layout.time_column && *layout.time_column == col) {
        column_electrode.push_back(kTime);
        continue;
      }
      while (eeg_only && montage.electrodes()[next].kind != ChannelKind::kEeg) ++next;
      column_electrode.push_back(next++);
    }
  }
  if (layout.time_column && *layout.time_column >= column_electrode.size()) {
    Fail(ErrorCode::kMalformedRow, "time column index beyond row width");
  }

  // Montage-ordered list of the electrodes present in the file.
  std::vector<std::size_t> slot_of_column(column_electrode.size(), kTime);
  std::vector<std::size_t> present;
  for (std::size_t e = 0; e < montage.electrodes().size(); ++e) {
    for (std::size_t col = 0; col < column_electrode.size(); ++col) {
      if (column_electrode[col] == e) {
        if (slot_of_column[col] == kTime) slot_of_column[col] = present.size();
        present.push_back(e);
      }
    }
  }

  std::vector<std::vector<double>> samples(present.size());
  for (auto& s : samples) s.reserve(lines.size() - first_data);
  double last_time = -INFINITY;
  for (std::size_t row = first_data; row < lines.size(); ++row) {
    const auto fields = SplitFields(lines[row], layout.delimiter);
    if (fields.size() != column_electrode.size()) {
      Fail(ErrorCode::kMalformedRow,
           "row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
               " fields, expected " + std::to_string(column_electrode.size()));
    }
    for (std::size_t col = 0; col < fields.size(); ++col) {
      const double v = ParseSample(fields[col], row);
      if (column_electrode[col] == kTime) {
        if (!(v > last_time)) {
          Fail(ErrorCode::kMalformedRow,
               "time column not strictly increasing at row " + std::to_string(row));
        }
        last_time = v;
      } else {
        samples[slot_of_column[col]].push_back(v);
      }
    }
  }

  std::vector<ChannelInfo> channels;
  for (std::size_t e : present) channels.push_back(montage.electrodes()[e]);
  return Recording(std::move(channels), std::move(samples), sampling_rate);
}

std::string WriteCsv(const Recording& recording, const CsvLayout& layout) {
  ValidateLayout(layout);
  const std::size_t n_ch = recording.channel_count();
  const std::size_t width = n_ch + (layout.time_column ? 1 : 0);
  const std::size_t time_col =
      layout.time_column ? std::min(*layout.time_column, n_ch) : width;

  std::string out;
  out.reserve((recording.sample_count() + 1) * width * 12);
  auto append_number = [&out](double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
  };
  auto write_row = [&](auto&& field) {
    std::size_t ch = 0;
    for (std::size_t col = 0; col < width; ++col) {
      if (col > 0) out.push_back(layout.delimiter);
      if (col == time_col) {
        field(std::nullopt);
      } else {
        field(std::optional<std::size_t>(ch++));
      }
    }
    out.push_back('\n');
  };

  if (layout.has_header) {
    write_row([&](std::optional<std::size_t> ch) {
      out += ch ? recording.channels()[*ch].label : std::string("time_s");
    });
  }
  for (std::size_t i = 0; i < recording.sample_count(); ++i) {
    write_row([&](std::optional<std::size_t> ch) {
      if (ch) {
        append_number(recording.samples()[*ch][i]);
      } else {
        append_number(recording.start_offset() +
                      static_cast<double>(i) / recording.sampling_rate());
      }
    });
  }
  return out;
}

}  // namespace barstress
