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

#include "barstress/barstress.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/error.h"
#include "core/ingest.h"
#include "core/montage.h"
#include "core/regress.h"
#include "core/signal.h"
#include "core/spectral.h"
#include "core/synth.h"
#include "core/topo.h"

struct bs_buffer {
  std::string bytes;
};
struct bs_montage {
  barstress::Montage montage;
};
struct bs_recording {
  barstress::Recording recording;
};
struct bs_psd {
  barstress::PsdEstimate psd;
};
struct bs_bar_series {
  barstress::BarSeries series;
};
struct bs_fit {
  barstress::FitResult result;
};
struct bs_topo_grid {
  barstress::TopoGrid grid;
};

namespace {

namespace bs = barstress;

static_assert(static_cast<int>(bs::ErrorCode::kInvalidArgument) == BS_INVALID_ARGUMENT);
static_assert(static_cast<int>(bs::ErrorCode::kIo) == BS_IO_ERROR);
static_assert(static_cast<int>(bs::ErrorCode::kInvalidMontage) == BS_INVALID_MONTAGE);
static_assert(static_cast<int>(bs::ErrorCode::kDigitalRangeDegenerate) ==
              BS_DIGITAL_RANGE_DEGENERATE);
static_assert(static_cast<int>(bs::ErrorCode::kNonPositiveCurrent) ==
              BS_NON_POSITIVE_CURRENT);
static_assert(static_cast<int>(bs::ErrorCode::kDegenerateRange) == BS_DEGENERATE_RANGE);
static_assert(static_cast<int>(bs::ErrorCode::kMismatchedData) == BS_MISMATCHED_DATA);
static_assert(static_cast<int>(bs::ErrorCode::kBandAboveNyquist) == BS_BAND_ABOVE_NYQUIST);

thread_local std::string g_last_error;

bs_status SetError(bs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into a status and the thread-local
// message.
template <typename F>
bs_status Guard(F&& body) {
  try {
    body();
    return BS_OK;
  } catch (const bs::Error& e) {
    return SetError(static_cast<bs_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(BS_OUT_OF_MEMORY, "OutOfMemory: allocation failed");
  } catch (const std::exception& e) {
    return SetError(BS_INTERNAL_ERROR, std::string("InternalError: ") + e.what());
  } catch (...) {
    return SetError(BS_INTERNAL_ERROR, "InternalError: unknown exception");
  }
}

bs_status NullArgument(const char* name) {
  return SetError(BS_INVALID_ARGUMENT,
                  std::string("InvalidArgument: ") + name + " must not be NULL");
}

#define BS_REQUIRE(arg) \
  do {                  \
    if ((arg) == nullptr) return NullArgument(#arg); \
  } while (0)

std::string_view Bytes(const void* data, std::size_t length) {
  return {static_cast<const char*>(data), length};
}

bs_status EmitBuffer(std::string bytes, bs_buffer** out) {
  *out = new bs_buffer{std::move(bytes)};
  return BS_OK;
}

bs::BandDefinition ToBand(const bs_band& band) {
  return {band.name != nullptr ? band.name : "", band.f_low, band.f_high};
}

bs::CsvLayout ToLayout(const bs_csv_layout* layout) {
  bs::CsvLayout out;
  if (layout == nullptr) return out;
  out.delimiter = layout->delimiter;
  out.has_header = layout->has_header != 0;
  if (layout->has_time_column) out.time_column = layout->time_column;
  return out;
}

bs::WelchConfig ToWelch(const bs_welch_config* config) {
  bs::WelchConfig out;
  if (config == nullptr) return out;
  out.window_len = config->window_len;
  out.segment_count = config->segment_count;
  out.overlap_fraction = config->overlap_fraction;
  switch (config->taper) {
    case BS_TAPER_HAMMING: out.taper = bs::Taper::kHamming; break;
    case BS_TAPER_HANN: out.taper = bs::Taper::kHann; break;
    case BS_TAPER_RECTANGULAR: out.taper = bs::Taper::kRectangular; break;
    default: bs::Fail(bs::ErrorCode::kInvalidConfig, "unknown taper");
  }
  out.fft_size = config->fft_size;
  return out;
}

template <typename E>
E CheckedEnum(int v, int count, const char* what) {
  if (v < 0 || v >= count) {
    bs::Fail(bs::ErrorCode::kInvalidArgument, std::string("invalid ") + what);
  }
  return static_cast<E>(v);
}

bs::SessionProtocol ToProtocol(const bs_protocol& p) {
  bs::SessionProtocol out;
  out.phase = CheckedEnum<bs::Phase>(p.phase, 3, "phase");
  out.game_type = CheckedEnum<bs::GameType>(p.game_type, 4, "game type");
  out.gamer_type = CheckedEnum<bs::GamerType>(p.gamer_type, 2, "gamer type");
  out.music_type = CheckedEnum<bs::MusicType>(p.music_type, 5, "music type");
  if (p.epoch_count > 0 && p.epoch_times == nullptr) {
    bs::Fail(bs::ErrorCode::kInvalidArgument, "epoch_times is NULL");
  }
  out.epoch_times.assign(p.epoch_times, p.epoch_times + p.epoch_count);
  return out;
}

template <typename T>
std::span<const T> Span(const T* data, std::size_t n) {
  if (n > 0 && data == nullptr) {
    bs::Fail(bs::ErrorCode::kInvalidArgument, "data pointer is NULL");
  }
  return {data, n};
}

std::vector<double> ToVector(const double* data, std::size_t n) {
  auto s = Span(data, n);
  return {s.begin(), s.end()};
}

std::vector<bs::DataPoint> ToPoints(const double* x, const double* y, std::size_t n) {
  auto xs = Span(x, n);
  auto ys = Span(y, n);
  std::vector<bs::DataPoint> points(n);
  for (std::size_t i = 0; i < n; ++i) points[i] = {xs[i], ys[i]};
  return points;
}

bs::FitOptions ToOptions(const bs_fit_options* o) {
  bs::FitOptions out;
  if (o == nullptr) return out;
  out.max_iterations = o->max_iterations;
  out.tolerance = o->tolerance;
  out.multistart_count = o->multistart_count;
  out.b_min = o->b_min;
  out.b_max = o->b_max;
  out.c_min = o->c_min;
  out.c_max_factor = o->c_max_factor;
  return out;
}

template <typename Out, typename E>
bs_status ParseName(const char* name, E (*parse)(std::string_view), Out* out) {
  BS_REQUIRE(name);
  BS_REQUIRE(out);
  return Guard([&] { *out = static_cast<Out>(parse(name)); });
}

}  // namespace

extern "C" {

const char* bs_status_name(bs_status status) {
  switch (status) {
    case BS_OK: return "Ok";
    case BS_OUT_OF_MEMORY: return "OutOfMemory";
    case BS_INTERNAL_ERROR: return "InternalError";
    default: break;
  }
  // ErrorCodeName returns views into string literals.
  const std::string_view name = bs::ErrorCodeName(static_cast<bs::ErrorCode>(status));
  return name.data();
}

const char* bs_last_error(void) { return g_last_error.c_str(); }

const char* bs_version(void) { return "0.1.0"; }

// ---------------------------------------------------------------- buffers

const uint8_t* bs_buffer_data(const bs_buffer* buffer) {
  return buffer ? reinterpret_cast<const uint8_t*>(buffer->bytes.data()) : nullptr;
}
size_t bs_buffer_size(const bs_buffer* buffer) { return buffer ? buffer->bytes.size() : 0; }
void bs_buffer_free(bs_buffer* buffer) { delete buffer; }

// --------------------------------------------------------------- montages

bs_status bs_montage_load(const char* name_or_path, bs_montage** out) {
  BS_REQUIRE(name_or_path);
  BS_REQUIRE(out);
  return Guard([&] { *out = new bs_montage{bs::LoadMontage(name_or_path)}; });
}

bs_status bs_montage_from_json(const char* text, size_t length, bs_montage** out) {
  BS_REQUIRE(text);
  BS_REQUIRE(out);
  return Guard([&] { *out = new bs_montage{bs::MontageFromJson({text, length})}; });
}

bs_status bs_montage_to_json(const bs_montage* montage, bs_buffer** out) {
  BS_REQUIRE(montage);
  BS_REQUIRE(out);
  return Guard([&] { EmitBuffer(bs::MontageToJson(montage->montage), out); });
}

const char* bs_montage_name(const bs_montage* montage) {
  return montage ? montage->montage.name().c_str() : nullptr;
}
size_t bs_montage_electrode_count(const bs_montage* montage) {
  return montage ? montage->montage.electrodes().size() : 0;
}
size_t bs_montage_eeg_count(const bs_montage* montage) {
  return montage ? montage->montage.EegCount() : 0;
}
const char* bs_montage_label(const bs_montage* montage, size_t index) {
  if (!montage || index >= montage->montage.electrodes().size()) return nullptr;
  return montage->montage.electrodes()[index].label.c_str();
}
int bs_montage_is_eeg(const bs_montage* montage, size_t index) {
  if (!montage || index >= montage->montage.electrodes().size()) return 0;
  return montage->montage.electrodes()[index].kind == bs::ChannelKind::kEeg;
}
bs_status bs_montage_position(const bs_montage* montage, size_t index, double* x,
                              double* y) {
  BS_REQUIRE(montage);
  BS_REQUIRE(x);
  BS_REQUIRE(y);
  const auto& e = montage->montage.electrodes();
  if (index >= e.size()) {
    return SetError(BS_INVALID_ARGUMENT, "InvalidArgument: electrode index out of range");
  }
  *x = e[index].position.x;
  *y = e[index].position.y;
  return BS_OK;
}
void bs_montage_free(bs_montage* montage) { delete montage; }

// ------------------------------------------------------------- recordings

bs_csv_layout bs_csv_layout_default(void) { return bs_csv_layout{',', 1, 0, 0}; }

bs_status bs_recording_create(const bs_montage* montage, const char* const* labels,
                              size_t channel_count, const double* samples,
                              size_t sample_count, double sampling_rate, bs_recording** out) {
  BS_REQUIRE(out);
  return Guard([&] {
    const bs::Montage& m = montage ? montage->montage : bs::Montage::Default();
    const auto names = Span(labels, channel_count);
    const auto data = Span(samples, channel_count * sample_count);
    std::vector<bs::ChannelInfo> channels;
    std::vector<std::vector<double>> matrix;
    for (std::size_t c = 0; c < channel_count; ++c) {
      if (names[c] == nullptr) bs::Fail(bs::ErrorCode::kInvalidArgument, "NULL channel label");
      const auto index = m.Find(names[c]);
      if (!index) {
        bs::Fail(bs::ErrorCode::kUnknownChannelLabel,
                 std::string("'") + names[c] + "' is not in montage '" + m.name() + "'");
      }
      channels.push_back(m.electrodes()[*index]);
      const auto row = data.subspan(c * sample_count, sample_count);
      matrix.emplace_back(row.begin(), row.end());
    }
    *out = new bs_recording{bs::Recording(std::move(channels), std::move(matrix), sampling_rate)};
  });
}

bs_status bs_recording_read_csv(const void* bytes, size_t length, const bs_csv_layout* layout,
                                double sampling_rate, const bs_montage* montage,
                                bs_recording** out) {
  if (length > 0) BS_REQUIRE(bytes);
  BS_REQUIRE(out);
  return Guard([&] {
    const bs::Montage& m = montage ? montage->montage : bs::Montage::Default();
    *out = new bs_recording{
        bs::ReadCsv(Bytes(bytes, length), ToLayout(layout), sampling_rate, m)};
  });
}

bs_status bs_recording_read_edf(const void* bytes, size_t length, const bs_montage* montage,
                                bs_recording** out) {
  if (length > 0) BS_REQUIRE(bytes);
  BS_REQUIRE(out);
  return Guard([&] {
    const bs::Montage& m = montage ? montage->montage : bs::Montage::Default();
    *out = new bs_recording{bs::ReadEdf(Bytes(bytes, length), m)};
  });
}

bs_status bs_recording_write_csv(const bs_recording* recording, const bs_csv_layout* layout,
                                 bs_buffer** out) {
  BS_REQUIRE(recording);
  BS_REQUIRE(out);
  return Guard(
      [&] { EmitBuffer(bs::WriteCsv(recording->recording, ToLayout(layout)), out); });
}

bs_status bs_recording_write_edf(const bs_recording* recording, bs_buffer** out) {
  BS_REQUIRE(recording);
  BS_REQUIRE(out);
  return Guard([&] { EmitBuffer(bs::WriteEdf(recording->recording), out); });
}

size_t bs_recording_channel_count(const bs_recording* recording) {
  return recording ? recording->recording.channel_count() : 0;
}
size_t bs_recording_sample_count(const bs_recording* recording) {
  return recording ? recording->recording.sample_count() : 0;
}
double bs_recording_sampling_rate(const bs_recording* recording) {
  return recording ? recording->recording.sampling_rate() : 0.0;
}
const char* bs_recording_channel_label(const bs_recording* recording, size_t channel) {
  if (!recording || channel >= recording->recording.channel_count()) return nullptr;
  return recording->recording.channels()[channel].label.c_str();
}
int bs_recording_channel_is_eeg(const bs_recording* recording, size_t channel) {
  if (!recording || channel >= recording->recording.channel_count()) return 0;
  return recording->recording.channels()[channel].kind == bs::ChannelKind::kEeg;
}
const double* bs_recording_channel_samples(const bs_recording* recording, size_t channel) {
  if (!recording || channel >= recording->recording.channel_count()) return nullptr;
  return recording->recording.samples()[channel].data();
}
void bs_recording_free(bs_recording* recording) { delete recording; }

// ------------------------------------------------------ bands and protocol

bs_status bs_band_standard(const char* name, bs_band* out) {
  BS_REQUIRE(name);
  BS_REQUIRE(out);
  for (const auto& b : bs::StandardBands()) {
    if (b.name == name) {
      *out = bs_band{b.name.c_str(), b.f_low, b.f_high};
      return BS_OK;
    }
  }
  return SetError(BS_INVALID_ARGUMENT,
                  std::string("InvalidArgument: unknown band '") + name + "'");
}

bs_protocol bs_protocol_default(bs_phase phase) {
  static const double kDuring[] = {900.0, 1800.0, 2700.0, 3600.0};
  static const double kAfter[] = {0.0, 180.0, 360.0, 540.0, 720.0};
  static const double kBaseline[] = {0.0};
  bs_protocol p{phase, BS_GAME_NONE, BS_GAMER, BS_MUSIC_NONE, kBaseline, 1};
  if (phase == BS_PHASE_DURING_GAMEPLAY) {
    p.epoch_times = kDuring;
    p.epoch_count = 4;
  } else if (phase == BS_PHASE_AFTER_GAMEPLAY) {
    p.epoch_times = kAfter;
    p.epoch_count = 5;
  }
  return p;
}

const char* bs_phase_name(bs_phase v) {
  return v >= 0 && v < 3 ? bs::ToString(static_cast<bs::Phase>(v)).data() : nullptr;
}
const char* bs_game_type_name(bs_game_type v) {
  return v >= 0 && v < 4 ? bs::ToString(static_cast<bs::GameType>(v)).data() : nullptr;
}
const char* bs_gamer_type_name(bs_gamer_type v) {
  return v >= 0 && v < 2 ? bs::ToString(static_cast<bs::GamerType>(v)).data() : nullptr;
}
const char* bs_music_type_name(bs_music_type v) {
  return v >= 0 && v < 5 ? bs::ToString(static_cast<bs::MusicType>(v)).data() : nullptr;
}

bs_status bs_phase_from_name(const char* name, bs_phase* out) {
  return ParseName(name, &bs::ParsePhase, out);
}
bs_status bs_game_type_from_name(const char* name, bs_game_type* out) {
  return ParseName(name, &bs::ParseGameType, out);
}
bs_status bs_gamer_type_from_name(const char* name, bs_gamer_type* out) {
  return ParseName(name, &bs::ParseGamerType, out);
}
bs_status bs_music_type_from_name(const char* name, bs_music_type* out) {
  return ParseName(name, &bs::ParseMusicType, out);
}

// ---------------------------------------------------------------- spectra

bs_status bs_taper_from_name(const char* name, bs_taper* out) {
  return ParseName(name, &bs::ParseTaper, out);
}
const char* bs_taper_name(bs_taper taper) {
  return taper >= 0 && taper < 3 ? bs::ToString(static_cast<bs::Taper>(taper)).data()
                                 : nullptr;
}

bs_welch_config bs_welch_config_default(void) {
  return bs_welch_config{10.0, 4, 0.5, BS_TAPER_HAMMING, 0};
}

bs_status bs_window_power_norm(bs_taper taper, size_t m, double* out) {
  BS_REQUIRE(out);
  return Guard([&] {
    if (m == 0) bs::Fail(bs::ErrorCode::kEmptySegment, "taper length is zero");
    bs_welch_config c = bs_welch_config_default();
    c.taper = taper;
    *out = bs::WindowPowerNorm(ToWelch(&c).taper, m);
  });
}

bs_status bs_psd_compute(const bs_recording* recording, double t_start,
                         const bs_welch_config* config, bs_psd** out) {
  BS_REQUIRE(recording);
  BS_REQUIRE(out);
  return Guard([&] {
    const bs::WelchConfig welch = ToWelch(config);
    bs::ResolveWelch(welch, recording->recording.sampling_rate());
    const bs::Epoch epoch = bs::SliceWindow(recording->recording, t_start, welch.window_len);
    *out = new bs_psd{bs::WelchPsd(epoch, welch)};
  });
}

size_t bs_psd_bin_count(const bs_psd* psd) { return psd ? psd->psd.frequencies.size() : 0; }
const double* bs_psd_frequencies(const bs_psd* psd) {
  return psd ? psd->psd.frequencies.data() : nullptr;
}
size_t bs_psd_channel_count(const bs_psd* psd) { return psd ? psd->psd.channels.size() : 0; }
const char* bs_psd_channel_label(const bs_psd* psd, size_t channel) {
  if (!psd || channel >= psd->psd.channels.size()) return nullptr;
  return psd->psd.channels[channel].label.c_str();
}
const double* bs_psd_channel_power(const bs_psd* psd, size_t channel) {
  if (!psd || channel >= psd->psd.power.size()) return nullptr;
  return psd->psd.power[channel].data();
}

bs_status bs_psd_channel_band_power(const bs_psd* psd, size_t channel, const bs_band* band,
                                    double* out) {
  BS_REQUIRE(psd);
  BS_REQUIRE(band);
  BS_REQUIRE(out);
  return Guard([&] {
    if (channel >= psd->psd.channels.size()) {
      bs::Fail(bs::ErrorCode::kInvalidArgument, "channel index out of range");
    }
    *out = bs::ChannelBandPower(psd->psd, channel, ToBand(*band));
  });
}

bs_status bs_psd_band_power(const bs_psd* psd, const bs_band* band, const size_t* channels,
                            size_t count, double* out) {
  BS_REQUIRE(psd);
  BS_REQUIRE(band);
  BS_REQUIRE(out);
  return Guard([&] {
    *out = bs::BandPower(psd->psd, ToBand(*band),
                         channels ? Span(channels, count) : std::span<const size_t>{});
  });
}

bs_status bs_psd_band_ratio(const bs_psd* psd, const bs_band* numerator,
                            const bs_band* denominator, const size_t* channels, size_t count,
                            double* out) {
  BS_REQUIRE(psd);
  BS_REQUIRE(numerator);
  BS_REQUIRE(denominator);
  BS_REQUIRE(out);
  return Guard([&] {
    *out = bs::BandRatio(psd->psd, ToBand(*numerator), ToBand(*denominator),
                         channels ? Span(channels, count) : std::span<const size_t>{});
  });
}

bs_status bs_psd_write_channel_csv(const bs_psd* psd, size_t channel, bs_buffer** out) {
  BS_REQUIRE(psd);
  BS_REQUIRE(out);
  return Guard([&] {
    if (channel >= psd->psd.channels.size()) {
      bs::Fail(bs::ErrorCode::kInvalidArgument, "channel index out of range");
    }
    std::string csv = "frequency_hz,power_uv2_per_hz\n";
    const auto& f = psd->psd.frequencies;
    const auto& p = psd->psd.power[channel];
    char buf[64];
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto r = std::to_chars(buf, buf + sizeof(buf), f[i]);
      csv.append(buf, r.ptr);
      csv.push_back(',');
      r = std::to_chars(buf, buf + sizeof(buf), p[i]);
      csv.append(buf, r.ptr);
      csv.push_back('\n');
    }
    EmitBuffer(std::move(csv), out);
  });
}

void bs_psd_free(bs_psd* psd) { delete psd; }

bs_status bs_power_ratio(double numerator_power, double denominator_power, double* out) {
  BS_REQUIRE(out);
  return Guard([&] { *out = bs::PowerRatio(numerator_power, denominator_power); });
}

bs_status bs_relative_increase(double current, double baseline, double* out) {
  BS_REQUIRE(out);
  return Guard([&] { *out = bs::RelativeIncrease(current, baseline); });
}

// ------------------------------------------------------------- BAR series

bs_status bs_bar_series_compute(const bs_recording* recording, const bs_protocol* protocol,
                                const bs_welch_config* config, const bs_band* numerator,
                                const bs_band* denominator, const char* const* channels,
                                size_t channel_count, double baseline, bs_bar_series** out) {
  BS_REQUIRE(recording);
  BS_REQUIRE(protocol);
  BS_REQUIRE(out);
  return Guard([&] {
    bs::RatioBands bands;
    if (numerator) bands.numerator = ToBand(*numerator);
    if (denominator) bands.denominator = ToBand(*denominator);
    std::vector<std::string> labels;
    for (const char* label : Span(channels, channels ? channel_count : 0)) {
      if (label == nullptr) bs::Fail(bs::ErrorCode::kInvalidArgument, "NULL channel label");
      labels.emplace_back(label);
    }
    *out = new bs_bar_series{bs::BarTimeseries(recording->recording, ToProtocol(*protocol),
                                               ToWelch(config), bands, labels, baseline)};
  });
}

size_t bs_bar_series_size(const bs_bar_series* series) {
  return series ? series->series.points.size() : 0;
}

bs_status bs_bar_series_point(const bs_bar_series* series, size_t index, double* time_s,
                              double* ratio) {
  BS_REQUIRE(series);
  if (index >= series->series.points.size()) {
    return SetError(BS_INVALID_ARGUMENT, "InvalidArgument: point index out of range");
  }
  if (time_s) *time_s = series->series.points[index].time;
  if (ratio) *ratio = series->series.points[index].ratio;
  return BS_OK;
}

double bs_bar_series_baseline(const bs_bar_series* series) {
  return series ? series->series.baseline : 0.0;
}

bs_status bs_bar_series_write_csv(const bs_bar_series* series, bs_buffer** out) {
  BS_REQUIRE(series);
  BS_REQUIRE(out);
  return Guard([&] { EmitBuffer(bs::BarSeriesToCsv(series->series), out); });
}

void bs_bar_series_free(bs_bar_series* series) { delete series; }

// ------------------------------------------------------------- regression

bs_fit_options bs_fit_options_default(void) {
  const bs::FitOptions o;
  return bs_fit_options{o.max_iterations, o.tolerance, o.multistart_count, o.b_min,
                        o.b_max,          o.c_min,     o.c_max_factor};
}

bs_status bs_fit_4pl(const double* x, const double* y, size_t n,
                     const bs_fit_options* options, bs_fit** out) {
  BS_REQUIRE(out);
  return Guard([&] {
    const auto points = ToPoints(x, y, n);
    *out = new bs_fit{bs::Fit4pl(points, ToOptions(options))};
  });
}

bs_status bs_fit_quartic(const double* x, const double* y, size_t n, bs_fit** out) {
  BS_REQUIRE(out);
  return Guard([&] {
    const auto points = ToPoints(x, y, n);
    *out = new bs_fit{bs::FitQuartic(points)};
  });
}

bs_model_type bs_fit_model_type(const bs_fit* fit) {
  return fit && fit->result.type() == bs::ModelType::kQuartic ? BS_MODEL_QUARTIC
                                                               : BS_MODEL_4PL;
}

size_t bs_fit_params(const bs_fit* fit, double* out, size_t capacity) {
  if (!fit) return 0;
  const auto params = fit->result.Params();
  if (out) {
    for (std::size_t i = 0; i < params.size() && i < capacity; ++i) out[i] = params[i];
  }
  return params.size();
}

bs_fit_metrics bs_fit_get_metrics(const bs_fit* fit) {
  bs_fit_metrics m{};
  if (!fit) return m;
  const auto& r = fit->result;
  m.rss = r.rss;
  m.r_squared = r.r_squared;
  m.aic = r.aic;
  m.n = r.n;
  m.k = r.k;
  m.converged = r.converged;
  m.iterations = r.iterations;
  m.interpolating = r.interpolating;
  return m;
}

bs_status bs_fit_predict(const bs_fit* fit, double x, double* out) {
  BS_REQUIRE(fit);
  BS_REQUIRE(out);
  return Guard([&] { *out = fit->result.Predict(x); });
}

bs_status bs_fit_to_json(const bs_fit* fit, bs_buffer** out) {
  BS_REQUIRE(fit);
  BS_REQUIRE(out);
  return Guard([&] { EmitBuffer(bs::FitResultToJson(fit->result), out); });
}

bs_status bs_compare_fits(const bs_fit* const* fits, size_t count, size_t* order_out,
                          int* overfit_warning) {
  BS_REQUIRE(fits);
  BS_REQUIRE(order_out);
  return Guard([&] {
    std::vector<bs::FitResult> results;
    results.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (fits[i] == nullptr) bs::Fail(bs::ErrorCode::kInvalidArgument, "NULL fit handle");
      results.push_back(fits[i]->result);
    }
    const bs::Ranking ranking = bs::CompareModels(results);
    for (std::size_t i = 0; i < ranking.order.size(); ++i) order_out[i] = ranking.order[i];
    if (overfit_warning) *overfit_warning = ranking.overfit_warning;
  });
}

void bs_fit_free(bs_fit* fit) { delete fit; }

bs_status bs_eval_4pl(double a, double b, double c, double d, double x, double* out) {
  BS_REQUIRE(out);
  return Guard([&] { *out = bs::Eval4pl(bs::FourPLModel{a, b, c, d}, x); });
}

bs_status bs_r_squared(const double* observed, const double* predicted, size_t n,
                       double* out) {
  BS_REQUIRE(out);
  return Guard([&] { *out = bs::RSquared(Span(observed, n), Span(predicted, n)); });
}

bs_status bs_aic(double rss, int n, int k, double* out) {
  BS_REQUIRE(out);
  return Guard([&] { *out = bs::Aic(rss, n, k); });
}

// ------------------------------------------------------------ topography

bs_status bs_topo_vector_from_psd(const bs_psd* psd, const bs_montage* montage,
                                  bs_topo_scalar scalar, const bs_band* numerator,
                                  const bs_band* denominator, double* out, size_t capacity) {
  BS_REQUIRE(psd);
  BS_REQUIRE(out);
  return Guard([&] {
    const bs::Montage& m = montage ? montage->montage : bs::Montage::Default();
    bs::RatioBands bands;
    if (numerator) bands.numerator = ToBand(*numerator);
    if (denominator) bands.denominator = ToBand(*denominator);
    const auto kind = CheckedEnum<bs::TopoScalar>(scalar, 2, "topography scalar");
    const auto values = bs::TopoVectorFromPsd(psd->psd, m, kind, bands);
    if (capacity < values.size()) {
      bs::Fail(bs::ErrorCode::kLengthMismatch,
               "output holds " + std::to_string(capacity) + " values, need " +
                   std::to_string(values.size()));
    }
    std::copy(values.begin(), values.end(), out);
  });
}

bs_status bs_topo_interpolate(const double* values, size_t count, const bs_montage* montage,
                              size_t resolution, bs_topo_grid** out) {
  BS_REQUIRE(out);
  return Guard([&] {
    const bs::Montage& m = montage ? montage->montage : bs::Montage::Default();
    *out = new bs_topo_grid{bs::InterpolateScalp(Span(values, count), m, resolution)};
  });
}

size_t bs_topo_grid_resolution(const bs_topo_grid* grid) {
  return grid ? grid->grid.resolution() : 0;
}

bs_status bs_topo_grid_value(const bs_topo_grid* grid, size_t row, size_t col, double* value,
                             int* masked) {
  BS_REQUIRE(grid);
  const std::size_t n = grid->grid.resolution();
  if (row >= n || col >= n) {
    return SetError(BS_INVALID_ARGUMENT, "InvalidArgument: grid cell out of range");
  }
  if (value) *value = grid->grid.at(row, col);
  if (masked) *masked = grid->grid.masked(row, col);
  return BS_OK;
}

void bs_topo_grid_palette_range(const bs_topo_grid* grid, double* lo, double* hi) {
  if (!grid) return;
  if (lo) *lo = grid->grid.palette_min();
  if (hi) *hi = grid->grid.palette_max();
}

bs_status bs_topo_grid_set_palette_range(bs_topo_grid* grid, double lo, double hi) {
  BS_REQUIRE(grid);
  return Guard([&] { grid->grid = grid->grid.WithPaletteRange(lo, hi); });
}

bs_status bs_topo_grid_write_csv(const bs_topo_grid* grid, bs_buffer** out) {
  BS_REQUIRE(grid);
  BS_REQUIRE(out);
  return Guard([&] { EmitBuffer(bs::TopoGridToCsv(grid->grid), out); });
}

bs_status bs_topo_render(const bs_topo_grid* grid, bs_palette palette, bs_buffer** out) {
  BS_REQUIRE(grid);
  BS_REQUIRE(out);
  return Guard([&] {
    const auto p = CheckedEnum<bs::Palette>(palette, 2, "palette");
    EmitBuffer(bs::RenderTopomap(grid->grid, p), out);
  });
}

bs_status bs_topo_similarity(const double* a, const double* b, size_t n, double* out) {
  BS_REQUIRE(out);
  return Guard([&] { *out = bs::TopoSimilarity(Span(a, n), Span(b, n)); });
}

void bs_topo_grid_free(bs_topo_grid* grid) { delete grid; }

// ------------------------------------------------------------- synthesis

bs_status bs_synth_eeg(const bs_synth_spec* spec, bs_recording** out) {
  BS_REQUIRE(spec);
  BS_REQUIRE(out);
  return Guard([&] {
    bs::SynthSpec s;
    s.duration = spec->duration;
    s.sampling_rate = spec->sampling_rate;
    if (spec->montage) s.montage = spec->montage->montage;
    for (const auto& t : Span(spec->targets, spec->target_count)) {
      s.targets.push_back({ToBand(t.band), t.power});
    }
    for (const auto& t : Span(spec->channel_targets, spec->channel_target_count)) {
      if (t.label == nullptr || t.band == nullptr) {
        bs::Fail(bs::ErrorCode::kInvalidArgument, "channel target with NULL label or band");
      }
      s.channel_targets.push_back({t.label, t.band, t.power});
    }
    s.noise_floor = spec->noise_floor;
    s.seed = spec->seed;
    *out = new bs_recording{bs::SynthEeg(s)};
  });
}

const char* bs_synth_generator_name(void) { return bs::kSynthGeneratorName; }

bs_status bs_synth_trajectory(bs_model_type model, const double* params, size_t param_count,
                              const double* times, size_t n, double sigma, uint64_t seed,
                              double* y_out) {
  if (n > 0) BS_REQUIRE(y_out);
  return Guard([&] {
    const auto p = Span(params, param_count);
    bs::TrajectorySpec spec;
    if (model == BS_MODEL_4PL) {
      if (p.size() != 4) bs::Fail(bs::ErrorCode::kInvalidArgument, "4PL needs 4 parameters");
      spec.model = bs::FourPLModel{p[0], p[1], p[2], p[3]};
    } else if (model == BS_MODEL_QUARTIC) {
      if (p.size() != 5) {
        bs::Fail(bs::ErrorCode::kInvalidArgument, "quartic needs 5 parameters");
      }
      bs::QuarticModel q;
      std::copy(p.begin(), p.end(), q.coef.begin());
      spec.model = q;
    } else {
      bs::Fail(bs::ErrorCode::kInvalidArgument, "unknown model type");
    }
    spec.times = ToVector(times, n);
    spec.sigma = sigma;
    spec.seed = seed;
    const auto points = bs::SynthBarTrajectory(spec);
    for (std::size_t i = 0; i < points.size(); ++i) y_out[i] = points[i].y;
  });
}

}  // extern "C"
