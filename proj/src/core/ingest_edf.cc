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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "core/error.h"
#include "core/ingest.h"

namespace barstress {

namespace {

constexpr int kDigitalMin = -32768;
constexpr int kDigitalMax = 32767;
constexpr int kMaxSignals = 4096;

std::string_view TrimSpaces(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\0')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\0')) s.remove_suffix(1);
  return s;
}

// Sequential reader over fixed-width ASCII header fields.
class FieldReader {
 public:
  explicit FieldReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view Raw(std::size_t width, const char* what) {
    if (pos_ + width > bytes_.size()) {
      Fail(ErrorCode::kTruncatedHeader, std::string("header ends inside ") + what);
    }
    std::string_view field = bytes_.substr(pos_, width);
    pos_ += width;
    for (char c : field) {
      const auto u = static_cast<unsigned char>(c);
      if (u < 0x20 || u > 0x7E) {
        Fail(ErrorCode::kInvalidHeader, std::string("non-ASCII byte in ") + what);
      }
    }
    return field;
  }

  std::string Text(std::size_t width, const char* what) {
    return std::string(TrimSpaces(Raw(width, what)));
  }

  long Integer(std::size_t width, const char* what) {
    std::string_view s = TrimSpaces(Raw(width, what));
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      Fail(ErrorCode::kInvalidHeader, std::string("bad integer in ") + what);
    }
    return v;
  }

  double Real(std::size_t width, const char* what) {
    std::string_view s = TrimSpaces(Raw(width, what));
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
        !std::isfinite(v)) {
      Fail(ErrorCode::kInvalidHeader, std::string("bad number in ") + what);
    }
    return v;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void PutField(std::string& out, std::string_view value, std::size_t width) {
  std::string field(value.substr(0, width));
  field.resize(width, ' ');
  out += field;
}

double ParseBack(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

// Formats v in at most 8 characters, rounding outward: down when
// round_down, up otherwise. The parsed result is guaranteed to bound v.
std::string FormatBound(double v, bool round_down) {
  for (int decimals = 6; decimals >= 0; --decimals) {
    const double scale = std::pow(10.0, decimals);
    double r = round_down ? std::floor(v * scale) / scale : std::ceil(v * scale) / scale;
    for (int attempt = 0; attempt < 3; ++attempt) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.*f", decimals, r);
      std::string s(buf);
      if (s.size() > 8) break;
      const double parsed = ParseBack(s);
      if (round_down ? parsed <= v : parsed >= v) return s;
      r += (round_down ? -1.0 : 1.0) / scale;
    }
  }
  Fail(ErrorCode::kInvalidArgument,
       "value " + std::to_string(v) + " does not fit an 8-character EDF field");
}

std::string FormatDuration(double seconds) {
  for (int precision = 8; precision >= 1; --precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, seconds);
    if (std::string_view(buf).size() <= 8) return buf;
  }
  return "1";
}

}  // namespace

double EdfQuantum(const EdfSignalHeader& s) {
  return (s.physical_max - s.physical_min) / (s.digital_max - s.digital_min);
}

EdfHeader ParseEdfHeader(std::string_view bytes) {
  if (bytes.size() < kEdfFixedHeaderBytes) {
    Fail(ErrorCode::kTruncatedHeader,
         std::to_string(bytes.size()) + " bytes, fixed header needs 256");
  }
  FieldReader r(bytes);
  EdfHeader h;
  const std::string_view version = r.Raw(8, "version");
  if (TrimSpaces(version) != "0" || version.front() != '0') {
    Fail(ErrorCode::kBadMagic, "version field is not '0'");
  }
  h.version = "0";
  h.patient = r.Text(80, "patient");
  h.recording = r.Text(80, "recording");
  h.start_date = r.Text(8, "start date");
  h.start_time = r.Text(8, "start time");
  const long header_bytes = r.Integer(8, "header size");
  r.Raw(44, "reserved");
  const long record_count = r.Integer(8, "record count");
  h.record_duration = r.Real(8, "record duration");
  const long signal_count = r.Integer(4, "signal count");

  if (record_count == -1) {
    Fail(ErrorCode::kInvalidHeader, "record count unknown (-1) is not supported");
  }
  if (record_count < 1) {
    Fail(ErrorCode::kInvalidHeader, "record count must be >= 1");
  }
  if (!(h.record_duration > 0.0)) {
    Fail(ErrorCode::kInvalidHeader, "record duration must be positive");
  }
  if (signal_count < 1 || signal_count > kMaxSignals) {
    Fail(ErrorCode::kInvalidHeader, "signal count out of range");
  }
  const long expected_header =
      static_cast<long>(kEdfFixedHeaderBytes + kEdfSignalHeaderBytes * signal_count);
  if (header_bytes != expected_header) {
    Fail(ErrorCode::kInvalidHeader, "header size " + std::to_string(header_bytes) +
                                        " != " + std::to_string(expected_header));
  }
  if (bytes.size() < static_cast<std::size_t>(expected_header)) {
    Fail(ErrorCode::kTruncatedHeader, "signal headers truncated");
  }
  h.header_bytes = static_cast<int>(header_bytes);
  h.record_count = record_count;
  h.signal_count = static_cast<int>(signal_count);

  // Signal blocks are stored field-major: all labels, then all transducers...
  const std::size_t ns = h.signal_count;
  h.signals.resize(ns);
  for (auto& s : h.signals) s.label = r.Text(16, "label");
  for (auto& s : h.signals) s.transducer = r.Text(80, "transducer");
  for (auto& s : h.signals) s.unit = r.Text(8, "unit");
  for (auto& s : h.signals) s.physical_min = r.Real(8, "physical min");
  for (auto& s : h.signals) s.physical_max = r.Real(8, "physical max");
  for (auto& s : h.signals) {
    const long v = r.Integer(8, "digital min");
    if (v < kDigitalMin || v > kDigitalMax) {
      Fail(ErrorCode::kInvalidHeader, "digital min outside int16");
    }
    s.digital_min = static_cast<int>(v);
  }
  for (auto& s : h.signals) {
    const long v = r.Integer(8, "digital max");
    if (v < kDigitalMin || v > kDigitalMax) {
      Fail(ErrorCode::kInvalidHeader, "digital max outside int16");
    }
    s.digital_max = static_cast<int>(v);
  }
  for (auto& s : h.signals) s.prefilter = r.Text(80, "prefilter");
  for (auto& s : h.signals) {
    const long v = r.Integer(8, "samples per record");
    if (v < 1 || v > 10'000'000) {
      Fail(ErrorCode::kInvalidHeader, "samples per record out of range");
    }
    s.samples_per_record = static_cast<int>(v);
  }
  for (std::size_t i = 0; i < ns; ++i) r.Raw(32, "signal reserved");

  for (const auto& s : h.signals) {
    if (s.label == "EDF Annotations") {
      Fail(ErrorCode::kInvalidHeader, "annotation signals are not supported");
    }
    if (s.digital_min >= s.digital_max) {
      Fail(ErrorCode::kDigitalRangeDegenerate, "signal '" + s.label + "'");
    }
    if (s.physical_min == s.physical_max) {
      Fail(ErrorCode::kInvalidHeader,
           "signal '" + s.label + "' has equal physical min and max");
    }
    if (s.samples_per_record != h.signals.front().samples_per_record) {
      Fail(ErrorCode::kMixedSamplingRates,
           "signal '" + s.label + "' uses " + std::to_string(s.samples_per_record) +
               " samples per record, first signal " +
               std::to_string(h.signals.front().samples_per_record));
    }
  }
  return h;
}

Recording ReadEdf(std::string_view bytes, const Montage& montage) {
  const EdfHeader h = ParseEdfHeader(bytes);
  const std::size_t ns = h.signals.size();
  const std::size_t spr = h.signals.front().samples_per_record;
  const std::size_t record_bytes = 2 * spr * ns;
  const std::size_t available = bytes.size() - h.header_bytes;
  if (static_cast<unsigned long>(h.record_count) > available / record_bytes) {
    Fail(ErrorCode::kTruncatedData,
         "header declares " + std::to_string(h.record_count) + " records, file holds " +
             std::to_string(available / record_bytes));
  }

  std::vector<std::size_t> electrode(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto idx = montage.Find(h.signals[s].label);
    if (!idx) {
      Fail(ErrorCode::kUnknownChannelLabel,
           "signal '" + h.signals[s].label + "' not in montage '" + montage.name() + "'");
    }
    electrode[s] = *idx;
  }
  std::vector<std::size_t> order(ns);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return electrode[a] < electrode[b]; });

  const std::size_t total = static_cast<std::size_t>(h.record_count) * spr;
  std::vector<std::vector<double>> by_signal(ns, std::vector<double>(total));
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data()) + h.header_bytes;
  for (long rec = 0; rec < h.record_count; ++rec) {
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& sig = h.signals[s];
      const double gain = EdfQuantum(sig);
      double* dst = by_signal[s].data() + rec * spr;
      for (std::size_t i = 0; i < spr; ++i, data += 2) {
        const auto d = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(data[0] | (static_cast<unsigned>(data[1]) << 8)));
        dst[i] = sig.physical_min + (d - sig.digital_min) * gain;
      }
    }
  }

  std::vector<ChannelInfo> channels;
  std::vector<std::vector<double>> samples;
  for (std::size_t s : order) {
    channels.push_back(montage.electrodes()[electrode[s]]);
    samples.push_back(std::move(by_signal[s]));
  }
  return Recording(std::move(channels), std::move(samples), h.sampling_rate());
}

std::string WriteEdf(const Recording& recording) {
  const std::size_t n = recording.sample_count();
  const std::size_t ns = recording.channel_count();
  if (n == 0 || ns == 0) {
    Fail(ErrorCode::kInvalidArgument, "cannot write an empty recording as EDF");
  }
  if (ns > static_cast<std::size_t>(kMaxSignals)) {
    Fail(ErrorCode::kInvalidArgument, "too many channels for EDF");
  }
  const double fs = recording.sampling_rate();

  // Pick samples-per-record so that spr / duration reproduces fs exactly.
  auto exact = [&](std::size_t spr, std::string* duration) {
    *duration = FormatDuration(static_cast<double>(spr) / fs);
    const double back = ParseBack(*duration);
    return back > 0.0 && std::abs(spr / back - fs) <= 1e-9 * fs;
  };
  std::size_t spr = 0;
  std::string duration;
  const double fs_round = std::round(fs);
  if (fs_round == fs && fs_round <= 1e7) {
    const auto fsi = static_cast<std::size_t>(fs_round);
    spr = (n % fsi == 0) ? fsi : std::gcd(n, fsi);
    if (!exact(spr, &duration)) spr = 0;
  }
  if (spr == 0) {
    spr = n;
    if (!exact(spr, &duration)) {
      Fail(ErrorCode::kInvalidArgument,
           "sampling rate " + std::to_string(fs) + " Hz not representable in EDF");
    }
  }
  if (spr > 10'000'000) {
    Fail(ErrorCode::kInvalidArgument, "record too long for EDF");
  }
  const std::size_t records = n / spr;
  if (records > 99'999'999) {
    Fail(ErrorCode::kInvalidArgument, "too many EDF records");
  }

  std::vector<EdfSignalHeader> signals(ns);
  std::vector<std::string> pmin_text(ns), pmax_text(ns);
  for (std::size_t c = 0; c < ns; ++c) {
    const auto& label = recording.channels()[c].label;
    if (label.size() > 16) {
      Fail(ErrorCode::kInvalidArgument, "label '" + label + "' longer than 16 bytes");
    }
    const auto [lo, hi] = std::minmax_element(recording.samples()[c].begin(),
                                              recording.samples()[c].end());
    double pmin = *lo;
    double pmax = *hi;
    // A constant channel sits on digital_min, which decodes exactly.
    if (pmin == pmax) pmax += 1.0;
    auto& s = signals[c];
    s.label = label;
    s.unit = "uV";
    pmin_text[c] = FormatBound(pmin, true);
    pmax_text[c] = FormatBound(pmax, false);
    s.physical_min = ParseBack(pmin_text[c]);
    s.physical_max = ParseBack(pmax_text[c]);
    s.digital_min = kDigitalMin;
    s.digital_max = kDigitalMax;
    s.samples_per_record = static_cast<int>(spr);
  }

  std::string out;
  out.reserve(kEdfFixedHeaderBytes * (ns + 1) + 2 * n * ns);
  PutField(out, "0", 8);
  PutField(out, "X X X X", 80);
  PutField(out, "Startdate X X X barstress", 80);
  PutField(out, "01.01.00", 8);
  PutField(out, "00.00.00", 8);
  PutField(out, std::to_string(kEdfFixedHeaderBytes * (ns + 1)), 8);
  PutField(out, "", 44);
  PutField(out, std::to_string(records), 8);
  PutField(out, duration, 8);
  PutField(out, std::to_string(ns), 4);
  for (const auto& s : signals) PutField(out, s.label, 16);
  for (std::size_t c = 0; c < ns; ++c) PutField(out, "", 80);
  for (const auto& s : signals) PutField(out, s.unit, 8);
  for (const auto& t : pmin_text) PutField(out, t, 8);
  for (const auto& t : pmax_text) PutField(out, t, 8);
  for (const auto& s : signals) PutField(out, std::to_string(s.digital_min), 8);
  for (const auto& s : signals) PutField(out, std::to_string(s.digital_max), 8);
  for (std::size_t c = 0; c < ns; ++c) PutField(out, "", 80);
  for (const auto& s : signals) PutField(out, std::to_string(s.samples_per_record), 8);
  for (std::size_t c = 0; c < ns; ++c) PutField(out, "", 32);

  for (std::size_t rec = 0; rec < records; ++rec) {
    for (std::size_t c = 0; c < ns; ++c) {
      const auto& s = signals[c];
      const double scale = 1.0 / EdfQuantum(s);
      const double* src = recording.samples()[c].data() + rec * spr;
      for (std::size_t i = 0; i < spr; ++i) {
        double d = std::round(s.digital_min + (src[i] - s.physical_min) * scale);
        d = std::clamp(d, static_cast<double>(s.digital_min),
                       static_cast<double>(s.digital_max));
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(d));
        out.push_back(static_cast<char>(u & 0xFF));
        out.push_back(static_cast<char>(u >> 8));
      }
    }
  }
  return out;
}

}  // namespace barstress
