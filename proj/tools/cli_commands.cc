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

#include "cli_commands.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "barstress/barstress.h"

namespace barstress_cli {
namespace {

namespace fs = std::filesystem;

// ------------------------------------------------------------ C API glue

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using MontagePtr = std::unique_ptr<bs_montage, Deleter<bs_montage, bs_montage_free>>;
using RecordingPtr = std::unique_ptr<bs_recording, Deleter<bs_recording, bs_recording_free>>;
using PsdPtr = std::unique_ptr<bs_psd, Deleter<bs_psd, bs_psd_free>>;
using SeriesPtr = std::unique_ptr<bs_bar_series, Deleter<bs_bar_series, bs_bar_series_free>>;
using FitPtr = std::unique_ptr<bs_fit, Deleter<bs_fit, bs_fit_free>>;
using GridPtr = std::unique_ptr<bs_topo_grid, Deleter<bs_topo_grid, bs_topo_grid_free>>;
using BufferPtr = std::unique_ptr<bs_buffer, Deleter<bs_buffer, bs_buffer_free>>;

void Check(bs_status status) {
  if (status == BS_OK) return;
  throw CliError(status == BS_IO_ERROR ? kExitIo : kExitUsage, bs_last_error());
}

std::string TakeBuffer(bs_buffer* raw) {
  BufferPtr buffer(raw);
  return {reinterpret_cast<const char*>(bs_buffer_data(buffer.get())),
          bs_buffer_size(buffer.get())};
}

std::string Num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, r.ptr};
}

// ---------------------------------------------------------------- output

class Outputs {
 public:
  explicit Outputs(const Json& config)
      : dir_(config["out"].get<std::string>()), quiet_(config["quiet"].get<bool>()) {}

  void Add(std::string name, std::string bytes) {
    files_.emplace_back(std::move(name), std::move(bytes));
  }
  void AddJson(std::string name, const Json& doc) { Add(std::move(name), doc.dump(2) + "\n"); }

  // Writes everything collected so far.
  void Flush() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    for (const auto& [name, bytes] : files_) {
      const fs::path path = dir_ / name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      out.close();
      if (!out) IoError("cannot write '" + path.string() + "'");
      if (!quiet_) std::cout << "wrote " << path.string() << "\n";
    }
    files_.clear();
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  bool quiet_;
  std::vector<std::pair<std::string, std::string>> files_;
};

// --------------------------------------------------------- config readers

struct Band {
  std::string name;
  double f_low = 0.0;
  double f_high = 0.0;

  bs_band c() const { return bs_band{name.c_str(), f_low, f_high}; }
  Json ToJson() const { return Json{{"name", name}, {"f_low", f_low}, {"f_high", f_high}}; }
};

Band ResolveBand(const Json& config, const std::string& name) {
  const Json& custom = config["bands"];
  if (custom.contains(name)) {
    const Json& edges = custom[name];
    if (edges.is_array() && edges.size() == 2 && edges[0].is_number() && edges[1].is_number()) {
      return {name, edges[0].get<double>(), edges[1].get<double>()};
    }
    if (edges.is_object() && edges.contains("f_low") && edges.contains("f_high")) {
      return {name, edges["f_low"].get<double>(), edges["f_high"].get<double>()};
    }
    UsageError("bands." + name + ": expected [f_low, f_high]");
  }
  bs_band band;
  if (bs_band_standard(name.c_str(), &band) != BS_OK) {
    UsageError("unknown band '" + name + "'; define it under 'bands'");
  }
  return {name, band.f_low, band.f_high};
}

struct RatioBands {
  Band numerator;
  Band denominator;
};

RatioBands ResolveRatio(const Json& config) {
  return {ResolveBand(config, config["ratio"]["numerator"].get<std::string>()),
          ResolveBand(config, config["ratio"]["denominator"].get<std::string>())};
}

bs_welch_config WelchFrom(const Json& config) {
  const Json& w = config["welch"];
  bs_welch_config c = bs_welch_config_default();
  c.window_len = w["window_len"].get<double>();
  c.segment_count = w["segment_count"].get<int>();
  c.overlap_fraction = w["overlap_fraction"].get<double>();
  Check(bs_taper_from_name(w["taper"].get<std::string>().c_str(), &c.taper));
  const long long fft = w["fft_size"].get<long long>();
  if (fft < 0) UsageError("welch.fft_size must be >= 0");
  c.fft_size = static_cast<size_t>(fft);
  return c;
}

Json WelchToJson(const bs_welch_config& c) {
  return Json{{"window_len", c.window_len},
              {"segment_count", c.segment_count},
              {"overlap_fraction", c.overlap_fraction},
              {"taper", bs_taper_name(c.taper)},
              {"fft_size", c.fft_size}};
}

struct Protocol {
  bs_protocol p{};
  std::vector<double> times;

  const bs_protocol* c() {
    p.epoch_times = times.data();
    p.epoch_count = times.size();
    return &p;
  }

  Json ToJson() const {
    return Json{{"phase", bs_phase_name(p.phase)},
                {"game_type", bs_game_type_name(p.game_type)},
                {"gamer_type", bs_gamer_type_name(p.gamer_type)},
                {"music_type", bs_music_type_name(p.music_type)},
                {"epoch_times", times}};
  }
};

Protocol ProtocolFrom(const Json& config) {
  const Json& j = config["protocol"];
  Protocol out;
  Check(bs_phase_from_name(j["phase"].get<std::string>().c_str(), &out.p.phase));
  Check(bs_game_type_from_name(j["game_type"].get<std::string>().c_str(), &out.p.game_type));
  Check(bs_gamer_type_from_name(j["gamer_type"].get<std::string>().c_str(),
                                &out.p.gamer_type));
  Check(bs_music_type_from_name(j["music_type"].get<std::string>().c_str(),
                                &out.p.music_type));
  if (j["epoch_times"].is_null()) {
    const bs_protocol d = bs_protocol_default(out.p.phase);
    out.times.assign(d.epoch_times, d.epoch_times + d.epoch_count);
  } else {
    out.times = j["epoch_times"].get<std::vector<double>>();
  }
  return out;
}

std::vector<std::string> ChannelsFrom(const Json& config) {
  return config["channels"].get<std::vector<std::string>>();
}

MontagePtr MontageFrom(const std::string& name) {
  bs_montage* raw = nullptr;
  Check(bs_montage_load(name.c_str(), &raw));
  return MontagePtr(raw);
}

std::string RequireString(const Json& value, const std::string& message) {
  if (!value.is_string() || value.get<std::string>().empty()) UsageError(message);
  return value.get<std::string>();
}

std::string ExtensionLower(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

// CSV files carry no sampling rate; fall back to a synth metadata sidecar
// (<stem>.meta.json) when the config does not give one.
double CsvSamplingRate(const Json& config, const fs::path& path) {
  if (!config["sampling_rate"].is_null()) return config["sampling_rate"].get<double>();
  fs::path sidecar = path;
  sidecar.replace_extension(".meta.json");
  if (fs::exists(sidecar)) {
    const Json meta = ParseJson(ReadFile(sidecar.string()), sidecar.string());
    if (meta.contains("sampling_rate") && meta["sampling_rate"].is_number()) {
      return meta["sampling_rate"].get<double>();
    }
  }
  UsageError("sampling_rate is required for CSV input '" + path.string() + "'");
}

RecordingPtr LoadRecording(const Json& config, const bs_montage* montage) {
  const std::string input =
      RequireString(config["input"], "no input recording; pass a path or set 'input'");
  const std::string format = config["input_format"].get<std::string>();
  const fs::path path(input);
  const std::string bytes = ReadFile(input);

  bool edf = false;
  if (format == "auto") {
    edf = ExtensionLower(path) == ".edf";
  } else if (format == "edf") {
    edf = true;
  } else if (format != "csv") {
    UsageError("input_format must be auto, csv or edf");
  }

  bs_recording* raw = nullptr;
  if (edf) {
    Check(bs_recording_read_edf(bytes.data(), bytes.size(), montage, &raw));
  } else {
    const Json& c = config["csv"];
    const std::string delim = c["delimiter"].get<std::string>();
    if (delim.size() != 1) UsageError("csv.delimiter must be a single character");
    bs_csv_layout layout = bs_csv_layout_default();
    layout.delimiter = delim[0];
    layout.has_header = c["has_header"].get<bool>();
    if (!c["time_column"].is_null()) {
      layout.has_time_column = 1;
      layout.time_column = c["time_column"].get<size_t>();
    }
    Check(bs_recording_read_csv(bytes.data(), bytes.size(), &layout,
                                CsvSamplingRate(config, path), montage, &raw));
  }
  return RecordingPtr(raw);
}

std::string SafeName(const std::string& label) {
  std::string out;
  for (char ch : label) {
    out.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_'
                      ? ch
                      : '_');
  }
  return out;
}

// ------------------------------------------------------------------- psd

}  // namespace

int RunPsd(const Json& config) {
  const MontagePtr montage = MontageFrom(config["montage"].get<std::string>());
  const RecordingPtr rec = LoadRecording(config, montage.get());
  const bs_welch_config welch = WelchFrom(config);
  const double t_start = config["psd"]["t_start"].get<double>();

  bs_psd* raw = nullptr;
  Check(bs_psd_compute(rec.get(), t_start, &welch, &raw));
  const PsdPtr psd(raw);

  std::vector<size_t> selected;
  const auto labels = ChannelsFrom(config);
  if (labels.empty()) {
    for (size_t i = 0; i < bs_psd_channel_count(psd.get()); ++i) selected.push_back(i);
  }
  for (const auto& label : labels) {
    size_t i = 0;
    while (i < bs_psd_channel_count(psd.get()) && label != bs_psd_channel_label(psd.get(), i)) {
      ++i;
    }
    if (i == bs_psd_channel_count(psd.get())) {
      throw CliError(kExitUsage, "UnknownChannelLabel: '" + label + "' is not an EEG channel");
    }
    selected.push_back(i);
  }

  const std::string format = config["format"].is_null() ? "csv" : config["format"].get<std::string>();
  Outputs out(config);
  if (format == "csv") {
    for (size_t ch : selected) {
      bs_buffer* buf = nullptr;
      Check(bs_psd_write_channel_csv(psd.get(), ch, &buf));
      out.Add("psd_" + SafeName(bs_psd_channel_label(psd.get(), ch)) + ".csv",
              TakeBuffer(buf));
    }
  } else if (format == "json") {
    const size_t bins = bs_psd_bin_count(psd.get());
    const double* f = bs_psd_frequencies(psd.get());
    Json channels = Json::object();
    for (size_t ch : selected) {
      const double* p = bs_psd_channel_power(psd.get(), ch);
      channels[bs_psd_channel_label(psd.get(), ch)] = std::vector<double>(p, p + bins);
    }
    out.AddJson("psd.json", Json{{"schema_version", kSchemaVersion},
                                 {"input", config["input"]},
                                 {"t_start", t_start},
                                 {"sampling_rate", bs_recording_sampling_rate(rec.get())},
                                 {"welch", WelchToJson(welch)},
                                 {"frequencies_hz", std::vector<double>(f, f + bins)},
                                 {"power_uv2_per_hz", channels}});
  } else {
    UsageError("psd supports --format csv or json");
  }
  out.Flush();
  return kExitOk;
}

// ------------------------------------------------------------------- bar

int RunBar(const Json& config) {
  const MontagePtr montage = MontageFrom(config["montage"].get<std::string>());
  const RecordingPtr rec = LoadRecording(config, montage.get());
  const bs_welch_config welch = WelchFrom(config);
  Protocol protocol = ProtocolFrom(config);
  const RatioBands ratio = ResolveRatio(config);
  const bs_band num = ratio.numerator.c();
  const bs_band den = ratio.denominator.c();
  const auto labels = ChannelsFrom(config);
  std::vector<const char*> label_ptrs;
  for (const auto& l : labels) label_ptrs.push_back(l.c_str());

  std::optional<double> baseline;
  if (!config["baseline"].is_null()) {
    if (!config["baseline"].is_number()) UsageError("baseline must be a number");
    baseline = config["baseline"].get<double>();
  }

  bs_bar_series* raw = nullptr;
  Check(bs_bar_series_compute(rec.get(), protocol.c(), &welch, &num, &den,
                              label_ptrs.data(), label_ptrs.size(), baseline.value_or(0.0),
                              &raw));
  const SeriesPtr series(raw);
  const size_t n = bs_bar_series_size(series.get());
  std::vector<double> times(n), ratios(n);
  for (size_t i = 0; i < n; ++i) Check(bs_bar_series_point(series.get(), i, &times[i], &ratios[i]));

  // A baseline session is its own reference.
  if (!baseline && protocol.p.phase == BS_PHASE_BASELINE && n > 0) {
    double sum = 0.0;
    for (double r : ratios) sum += r;
    baseline = sum / static_cast<double>(n);
  }

  std::vector<std::optional<double>> increase(n);
  if (baseline) {
    for (size_t i = 0; i < n; ++i) {
      double v = 0.0;
      if (bs_relative_increase(ratios[i], *baseline, &v) == BS_OK) increase[i] = v;
    }
  }

  bs_buffer* buf = nullptr;
  Check(bs_bar_series_write_csv(series.get(), &buf));
  std::istringstream base_csv(TakeBuffer(buf));
  std::string csv, line;
  for (size_t row = 0; std::getline(base_csv, line); ++row) {
    if (line.empty()) continue;
    csv += line;
    if (row == 0) {
      csv += ",baseline,relative_increase\n";
    } else {
      csv += "," + (baseline ? Num(*baseline) : std::string()) + "," +
             (increase[row - 1] ? Num(*increase[row - 1]) : std::string()) + "\n";
    }
  }

  std::string points = "x_minutes,y_ratio\n";
  if (protocol.p.phase == BS_PHASE_DURING_GAMEPLAY && baseline && n > 0 && times[0] > 0.0) {
    points += "0," + Num(*baseline) + "\n";
  }
  Json json_points = Json::array();
  for (size_t i = 0; i < n; ++i) {
    points += Num(times[i] / 60.0) + "," + Num(ratios[i]) + "\n";
    json_points.push_back(Json{{"time_s", times[i]},
                               {"minutes", times[i] / 60.0},
                               {"bar", ratios[i]},
                               {"relative_increase",
                                increase[i] ? Json(*increase[i]) : Json(nullptr)}});
  }

  Outputs out(config);
  out.Add("bar.csv", csv);
  out.Add("bar_points.csv", points);
  out.AddJson("bar.json",
              Json{{"schema_version", kSchemaVersion},
                   {"input", config["input"]},
                   {"sampling_rate", bs_recording_sampling_rate(rec.get())},
                   {"protocol", protocol.ToJson()},
                   {"ratio", {{"numerator", ratio.numerator.ToJson()},
                              {"denominator", ratio.denominator.ToJson()}}},
                   {"channels", labels.empty() ? Json("all") : Json(labels)},
                   {"welch", WelchToJson(welch)},
                   {"baseline", baseline ? Json(*baseline) : Json(nullptr)},
                   {"points", json_points}});
  out.Flush();
  if (!config["quiet"].get<bool>()) {
    for (size_t i = 0; i < n; ++i) {
      std::cout << "t=" << Num(times[i]) << "s bar=" << Num(ratios[i]) << "\n";
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------- fit

namespace {

bool ParseDouble(std::string s, double* out) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  if (first == std::string::npos) return false;
  s = s.substr(first, last - first + 1);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), *out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(*out);
}

// Two-column CSV (x_minutes, y_ratio); the first line may be a header.
std::vector<std::pair<double, double>> ReadPoints(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::pair<double, double>> points;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    double x = 0.0, y = 0.0;
    const bool two = comma != std::string::npos &&
                     line.find(',', comma + 1) == std::string::npos;
    if (two && ParseDouble(line.substr(0, comma), &x) &&
        ParseDouble(line.substr(comma + 1), &y)) {
      points.emplace_back(x, y);
      continue;
    }
    if (lineno == 1 && two) continue;  // header
    UsageError(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
  }
  return points;
}

Json FitJson(const bs_fit* fit) {
  bs_buffer* buf = nullptr;
  Check(bs_fit_to_json(fit, &buf));
  return Json::parse(TakeBuffer(buf));
}

}  // namespace

int RunFit(const Json& config) {
  const Json& f = config["fit"];
  const std::string path =
      RequireString(f["points"], "no points file; pass a path or set 'fit.points'");
  const std::string model = f["model"].get<std::string>();
  if (model != "4pl" && model != "quartic" && model != "both") {
    UsageError("fit.model must be 4pl, quartic or both");
  }
  const auto points = ReadPoints(path);
  std::vector<double> x, y;
  for (const auto& [px, py] : points) {
    x.push_back(px);
    y.push_back(py);
  }

  bs_fit_options options = bs_fit_options_default();
  options.max_iterations = f["max_iterations"].get<int>();
  options.tolerance = f["tolerance"].get<double>();
  options.multistart_count = f["multistart_count"].get<int>();
  options.b_min = f["b_min"].get<double>();
  options.b_max = f["b_max"].get<double>();
  options.c_min = f["c_min"].get<double>();
  options.c_max_factor = f["c_max_factor"].get<double>();

  std::vector<std::pair<std::string, FitPtr>> fits;
  if (model != "quartic") {
    bs_fit* raw = nullptr;
    Check(bs_fit_4pl(x.data(), y.data(), x.size(), &options, &raw));
    fits.emplace_back("4pl", FitPtr(raw));
  }
  if (model != "4pl") {
    bs_fit* raw = nullptr;
    Check(bs_fit_quartic(x.data(), y.data(), x.size(), &raw));
    fits.emplace_back("quartic", FitPtr(raw));
  }

  Json doc{{"schema_version", kSchemaVersion}, {"points_file", path}};
  Json pts = Json::array();
  for (const auto& [px, py] : points) pts.push_back(Json::array({px, py}));
  doc["points"] = pts;
  Json models = Json::object();
  bool converged = true;
  for (const auto& [name, fit] : fits) {
    models[name] = FitJson(fit.get());
    converged = converged && bs_fit_get_metrics(fit.get()).converged;
  }
  doc["models"] = models;

  if (fits.size() == 2) {
    const bs_fit* handles[2] = {fits[0].second.get(), fits[1].second.get()};
    size_t order[2] = {0, 1};
    int overfit = 0;
    Check(bs_compare_fits(handles, 2, order, &overfit));
    Json ranking = Json::array();
    for (size_t i : order) ranking.push_back(fits[i].first);
    Json cmp{{"criterion", "aic"}, {"ranking", ranking}, {"overfit_warning", overfit != 0}};
    if (overfit) {
      const std::string& best = fits[order[0]].first;
      cmp["warning"] = best + " interpolates all " + std::to_string(points.size()) +
                       " points (zero residual, AIC -inf); its top rank reflects "
                       "overfitting, not a better model";
    }
    doc["comparison"] = cmp;
  }
  doc["converged"] = converged;

  Outputs out(config);
  out.AddJson("fit.json", doc);
  out.Flush();
  if (!config["quiet"].get<bool>()) {
    for (const auto& [name, fit] : fits) {
      const bs_fit_metrics m = bs_fit_get_metrics(fit.get());
      std::cout << name << ": r_squared=" << Num(m.r_squared)
                << " aic=" << (std::isinf(m.aic) ? std::string("-inf") : Num(m.aic)) << "\n";
    }
  }
  if (!converged) {
    std::cerr << "barstress: error: NonConvergence: fit did not converge; partial results "
                 "written to fit.json\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ topo

int RunTopo(const Json& config) {
  const MontagePtr montage = MontageFrom(config["montage"].get<std::string>());
  const RecordingPtr rec = LoadRecording(config, montage.get());
  const bs_welch_config welch = WelchFrom(config);
  Protocol protocol = ProtocolFrom(config);
  const Json& t = config["topo"];
  const std::string scalar_name = t["scalar"].get<std::string>();
  const long long resolution = t["resolution"].get<long long>();
  if (resolution < 1) UsageError("topo.resolution must be >= 1");
  const std::string palette_name = t["palette"].get<std::string>();
  bs_palette palette = BS_PALETTE_BLUE_RED;
  if (palette_name == "gray") {
    palette = BS_PALETTE_GRAY;
  } else if (palette_name != "blue_red") {
    UsageError("topo.palette must be blue_red or gray");
  }
  const char* image_ext = palette == BS_PALETTE_GRAY ? ".pgm" : ".ppm";

  bs_topo_scalar scalar = BS_TOPO_RATIO;
  RatioBands bands = ResolveRatio(config);
  if (scalar_name.rfind("band:", 0) == 0) {
    scalar = BS_TOPO_BAND_POWER;
    bands.numerator = ResolveBand(config, scalar_name.substr(5));
  } else if (scalar_name != "bar") {
    UsageError("topo.scalar must be 'bar' or 'band:<name>'");
  }
  const bs_band num = bands.numerator.c();
  const bs_band den = bands.denominator.c();
  if (protocol.times.empty()) throw CliError(kExitUsage, "EmptyProtocol: no epochs");

  const size_t eeg = bs_montage_eeg_count(montage.get());
  std::vector<std::vector<double>> vectors;
  for (double time : protocol.times) {
    bs_psd* raw = nullptr;
    Check(bs_psd_compute(rec.get(), time, &welch, &raw));
    const PsdPtr psd(raw);
    std::vector<double> v(eeg);
    Check(bs_topo_vector_from_psd(psd.get(), montage.get(), scalar, &num, &den, v.data(),
                                  v.size()));
    vectors.push_back(std::move(v));
  }

  // A shared colour range keeps the epochs visually comparable.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : vectors) {
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!(lo < hi)) {
    lo -= 1.0;
    hi += 1.0;
  }

  Outputs out(config);
  Json epochs = Json::array();
  std::vector<std::string> labels;
  for (size_t i = 0; i < bs_montage_electrode_count(montage.get()); ++i) {
    if (bs_montage_is_eeg(montage.get(), i)) labels.push_back(bs_montage_label(montage.get(), i));
  }
  for (size_t e = 0; e < vectors.size(); ++e) {
    bs_topo_grid* raw = nullptr;
    Check(bs_topo_interpolate(vectors[e].data(), vectors[e].size(), montage.get(),
                              static_cast<size_t>(resolution), &raw));
    const GridPtr grid(raw);
    Check(bs_topo_grid_set_palette_range(grid.get(), lo, hi));
    bs_buffer* image = nullptr;
    Check(bs_topo_render(grid.get(), palette, &image));
    bs_buffer* csv = nullptr;
    Check(bs_topo_grid_write_csv(grid.get(), &csv));
    const std::string stem = "topo_" + std::to_string(e);
    out.Add(stem + image_ext, TakeBuffer(image));
    out.Add(stem + ".csv", TakeBuffer(csv));
    Json values = Json::object();
    for (size_t i = 0; i < labels.size(); ++i) values[labels[i]] = vectors[e][i];
    epochs.push_back(Json{{"time_s", protocol.times[e]},
                          {"values", values},
                          {"image", stem + image_ext},
                          {"grid", stem + ".csv"}});
  }

  const size_t m = vectors.size();
  std::vector<std::vector<double>> sim(m, std::vector<double>(m));
  std::string sim_csv = "time_s";
  for (double time : protocol.times) sim_csv += "," + Num(time);
  sim_csv += "\n";
  for (size_t i = 0; i < m; ++i) {
    sim_csv += Num(protocol.times[i]);
    for (size_t j = 0; j < m; ++j) {
      Check(bs_topo_similarity(vectors[i].data(), vectors[j].data(), eeg, &sim[i][j]));
      sim_csv += "," + Num(sim[i][j]);
    }
    sim_csv += "\n";
  }
  out.Add("similarity.csv", sim_csv);
  out.AddJson("topo.json", Json{{"schema_version", kSchemaVersion},
                                {"input", config["input"]},
                                {"scalar", scalar_name},
                                {"palette", palette_name},
                                {"resolution", resolution},
                                {"palette_range", Json::array({lo, hi})},
                                {"protocol", protocol.ToJson()},
                                {"epochs", epochs},
                                {"similarity", sim}});
  out.Flush();
  return kExitOk;
}

// ----------------------------------------------------------------- synth

int RunSynth(const Json& config) {
  const Json& s = config["synth"];
  const std::string montage_name =
      s["montage"].is_null() ? config["montage"].get<std::string>()
                             : s["montage"].get<std::string>();
  const MontagePtr montage = MontageFrom(montage_name);

  // Targets: [{band, power[, f_low, f_high]}] or {band: power}.
  std::vector<Band> bands;
  std::vector<double> powers;
  const Json& targets = s["targets"];
  if (!targets.is_null() && !targets.is_object() && !targets.is_array()) {
    UsageError("synth.targets must be an object or an array");
  }
  auto add_target = [&](const std::string& name, const Json& entry, double power) {
    Band band = entry.is_object() && entry.contains("f_low")
                    ? Band{name, entry["f_low"].get<double>(), entry["f_high"].get<double>()}
                    : ResolveBand(config, name);
    bands.push_back(std::move(band));
    powers.push_back(power);
  };
  if (targets.is_object()) {
    for (auto it = targets.begin(); it != targets.end(); ++it) {
      if (!it.value().is_number()) UsageError("synth.targets." + it.key() + " must be a number");
      add_target(it.key(), it.value(), it.value().get<double>());
    }
  } else {
    for (const auto& entry : targets) {
      if (!entry.is_object() || !entry.contains("band") || !entry.contains("power")) {
        UsageError("synth.targets entries need 'band' and 'power'");
      }
      add_target(entry["band"].get<std::string>(), entry, entry["power"].get<double>());
    }
  }
  std::vector<bs_band_target> c_targets;
  for (size_t i = 0; i < bands.size(); ++i) c_targets.push_back({bands[i].c(), powers[i]});

  struct ChannelTarget {
    std::string label, band;
    double power;
  };
  std::vector<ChannelTarget> overrides;
  for (const auto& entry : s["channel_targets"]) {
    if (!entry.is_object() || !entry.contains("label") || !entry.contains("band") ||
        !entry.contains("power")) {
      UsageError("synth.channel_targets entries need 'label', 'band' and 'power'");
    }
    overrides.push_back({entry["label"].get<std::string>(), entry["band"].get<std::string>(),
                         entry["power"].get<double>()});
  }
  std::vector<bs_channel_target> c_overrides;
  for (const auto& o : overrides) {
    c_overrides.push_back({o.label.c_str(), o.band.c_str(), o.power});
  }

  const uint64_t seed =
      config["seed"].is_null() ? s["seed"].get<uint64_t>() : config["seed"].get<uint64_t>();
  bs_synth_spec spec{};
  spec.duration = s["duration"].get<double>();
  spec.sampling_rate = s["sampling_rate"].get<double>();
  spec.montage = montage.get();
  spec.targets = c_targets.data();
  spec.target_count = c_targets.size();
  spec.channel_targets = c_overrides.data();
  spec.channel_target_count = c_overrides.size();
  spec.noise_floor = s["noise_floor"].get<double>();
  spec.seed = seed;

  bs_recording* raw = nullptr;
  Check(bs_synth_eeg(&spec, &raw));
  const RecordingPtr rec(raw);

  auto formats = s["formats"].get<std::vector<std::string>>();
  if (!config["format"].is_null()) {
    const std::string f = config["format"].get<std::string>();
    if (f != "csv") UsageError("synth writes csv or edf; set synth.formats for edf");
    formats = {"csv"};
  }
  if (formats.empty()) UsageError("synth.formats is empty");

  const std::string name = SafeName(s["name"].get<std::string>());
  Outputs out(config);
  Json files = Json::array();
  for (const auto& f : formats) {
    bs_buffer* buf = nullptr;
    if (f == "csv") {
      const bs_csv_layout layout = bs_csv_layout_default();
      Check(bs_recording_write_csv(rec.get(), &layout, &buf));
    } else if (f == "edf") {
      Check(bs_recording_write_edf(rec.get(), &buf));
    } else {
      UsageError("unknown synth format '" + f + "'");
    }
    out.Add(name + "." + f, TakeBuffer(buf));
    files.push_back(name + "." + f);
  }

  Json target_json = Json::array();
  for (size_t i = 0; i < bands.size(); ++i) {
    Json t = bands[i].ToJson();
    t["power"] = powers[i];
    target_json.push_back(t);
  }
  Json override_json = Json::array();
  for (const auto& o : overrides) {
    override_json.push_back(Json{{"label", o.label}, {"band", o.band}, {"power", o.power}});
  }
  out.AddJson(name + ".meta.json", Json{{"schema_version", kSchemaVersion},
                                        {"generator", bs_synth_generator_name()},
                                        {"seed", seed},
                                        {"duration", spec.duration},
                                        {"sampling_rate", spec.sampling_rate},
                                        {"montage", bs_montage_name(montage.get())},
                                        {"noise_floor", spec.noise_floor},
                                        {"targets", target_json},
                                        {"channel_targets", override_json},
                                        {"files", files}});
  out.Flush();
  return kExitOk;
}

// ---------------------------------------------------------------- report

namespace {

std::optional<Json> LoadArtifact(const fs::path& dir, const std::string& name) {
  const fs::path path = dir / name;
  if (!fs::exists(path)) return std::nullopt;
  return ParseJson(ReadFile(path.string()), path.string());
}

std::string Cell(const Json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_number()) return Num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int RunReport(const Json& config) {
  const std::string dir_name = config["report"]["dir"].is_null()
                                   ? config["out"].get<std::string>()
                                   : config["report"]["dir"].get<std::string>();
  const fs::path dir(dir_name);
  const auto bar = LoadArtifact(dir, "bar.json");
  const auto fit = LoadArtifact(dir, "fit.json");
  const auto topo = LoadArtifact(dir, "topo.json");

  const std::pair<const char*, bool> present[] = {
      {"bar", bar.has_value()}, {"fits", fit.has_value()}, {"topography", topo.has_value()}};
  for (const auto& req : config["report"]["require"]) {
    const std::string name = req.get<std::string>();
    bool known = false;
    for (const auto& [section, ok] : present) {
      if (name != section) continue;
      known = true;
      if (!ok) {
        throw CliError(kExitUsage, "MissingArtifacts: required section '" + name +
                                       "' has no artifact in '" + dir_name + "'");
      }
    }
    if (!known) UsageError("report.require: unknown section '" + name + "'");
  }
  if (!bar && !fit && !topo) {
    throw CliError(kExitUsage, "MissingArtifacts: no bar.json, fit.json or topo.json in '" +
                                   dir_name + "'");
  }

  Json sections = Json::object();
  std::ostringstream md;
  md << "# barstress report\n\n";

  if (bar) {
    sections["bar"] = Json{{"present", true},
                           {"source", "bar.json"},
                           {"protocol", (*bar)["protocol"]},
                           {"ratio", (*bar)["ratio"]},
                           {"baseline", (*bar)["baseline"]},
                           {"points", (*bar)["points"]}};
    md << "## Band power ratio\n\n";
    md << "Phase: " << Cell((*bar)["protocol"]["phase"])
       << ", game: " << Cell((*bar)["protocol"]["game_type"])
       << ", player: " << Cell((*bar)["protocol"]["gamer_type"])
       << ", music: " << Cell((*bar)["protocol"]["music_type"]) << ".\n";
    md << "Baseline: " << Cell((*bar)["baseline"]) << ".\n\n";
    md << "| time (s) | minutes | ratio | relative increase |\n|---|---|---|---|\n";
    for (const auto& p : (*bar)["points"]) {
      md << "| " << Cell(p["time_s"]) << " | " << Cell(p["minutes"]) << " | "
         << Cell(p["bar"]) << " | " << Cell(p["relative_increase"]) << " |\n";
    }
    md << "\n";
  } else {
    sections["bar"] = Json{{"present", false}};
    md << "## Band power ratio\n\nAbsent.\n\n";
  }

  if (fit) {
    Json models = Json::object();
    for (auto it = (*fit)["models"].begin(); it != (*fit)["models"].end(); ++it) {
      const Json& m = it.value();
      models[it.key()] = Json{{"params", m["params"]},
                              {"r_squared", m["r_squared"]},
                              {"aic", m["aic"]},
                              {"rss", m["rss"]},
                              {"converged", m["converged"]},
                              {"interpolating", m["interpolating"]}};
    }
    sections["fits"] = Json{{"present", true},
                            {"source", "fit.json"},
                            {"points", (*fit)["points"]},
                            {"models", models},
                            {"comparison", fit->value("comparison", Json(nullptr))}};
    md << "## Curve fits\n\n| model | R^2 | AIC | converged | parameters |\n"
          "|---|---|---|---|---|\n";
    for (auto it = models.begin(); it != models.end(); ++it) {
      std::string params;
      for (auto p = it.value()["params"].begin(); p != it.value()["params"].end(); ++p) {
        if (!params.empty()) params += ", ";
        params += p.key() + "=" + Cell(p.value());
      }
      md << "| " << it.key() << " | " << Cell(it.value()["r_squared"]) << " | "
         << (it.value()["aic"].is_null() ? std::string("-inf") : Cell(it.value()["aic"]))
         << " | " << (it.value()["converged"].get<bool>() ? "yes" : "no") << " | " << params
         << " |\n";
    }
    if (fit->contains("comparison")) {
      const Json& c = (*fit)["comparison"];
      md << "\nAIC ranking: ";
      for (size_t i = 0; i < c["ranking"].size(); ++i) {
        md << (i ? " > " : "") << c["ranking"][i].get<std::string>();
      }
      md << ".\n";
      if (c.contains("warning")) md << "\nWarning: " << c["warning"].get<std::string>() << ".\n";
    }
    md << "\n";
  } else {
    sections["fits"] = Json{{"present", false}};
    md << "## Curve fits\n\nAbsent.\n\n";
  }

  if (topo) {
    Json images = Json::array();
    Json times = Json::array();
    for (const auto& e : (*topo)["epochs"]) {
      images.push_back(e["image"]);
      times.push_back(e["time_s"]);
    }
    sections["topography"] = Json{{"present", true},
                                  {"source", "topo.json"},
                                  {"scalar", (*topo)["scalar"]},
                                  {"epoch_times", times},
                                  {"images", images},
                                  {"similarity", (*topo)["similarity"]}};
    md << "## Topography\n\nScalar: " << Cell((*topo)["scalar"]) << ".\n\n";
    for (size_t i = 0; i < images.size(); ++i) {
      md << "- t = " << Cell(times[i]) << " s: " << images[i].get<std::string>() << "\n";
    }
    md << "\nCosine similarity between epochs:\n\n|   |";
    for (const auto& t : times) md << " " << Cell(t) << " |";
    md << "\n|---|";
    for (size_t i = 0; i < times.size(); ++i) md << "---|";
    md << "\n";
    for (size_t i = 0; i < times.size(); ++i) {
      md << "| " << Cell(times[i]) << " |";
      for (const auto& v : (*topo)["similarity"][i]) md << " " << Cell(v) << " |";
      md << "\n";
    }
    md << "\n";
  } else {
    sections["topography"] = Json{{"present", false}};
    md << "## Topography\n\nAbsent.\n";
  }

  Outputs out(config);
  out.AddJson("report.json", Json{{"schema_version", kSchemaVersion},
                                  {"artifact_dir", dir_name},
                                  {"sections", sections}});
  out.Add("report.md", md.str());
  out.AddJson("report.run.json",
              Json{{"generated_at", UtcNow()}, {"barstress_version", bs_version()}});
  out.Flush();
  return kExitOk;
}

}  // namespace barstress_cli
