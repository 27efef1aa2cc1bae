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

#include "cli_config.h"

#include <fstream>
#include <sstream>
#include <vector>

namespace barstress_cli {

Json DefaultConfig() {
  return Json{
      {"schema_version", kSchemaVersion},
      {"input", nullptr},
      {"input_format", "auto"},
      {"sampling_rate", nullptr},
      {"csv", {{"delimiter", ","}, {"has_header", true}, {"time_column", nullptr}}},
      {"montage", "default"},
      {"welch",
       {{"window_len", 10.0},
        {"segment_count", 4},
        {"overlap_fraction", 0.5},
        {"taper", "hamming"},
        {"fft_size", 0}}},
      {"bands", Json::object()},
      {"ratio", {{"numerator", "beta"}, {"denominator", "alpha"}}},
      {"channels", Json::array()},
      {"protocol",
       {{"phase", "baseline"},
        {"game_type", "none"},
        {"gamer_type", "gamer"},
        {"music_type", "none"},
        {"epoch_times", nullptr}}},
      {"baseline", nullptr},
      {"psd", {{"t_start", 0.0}}},
      {"fit",
       {{"points", nullptr},
        {"model", "both"},
        {"max_iterations", 500},
        {"tolerance", 1e-12},
        {"multistart_count", 16},
        {"b_min", 0.01},
        {"b_max", 50.0},
        {"c_min", 0.1},
        {"c_max_factor", 1e4}}},
      {"topo", {{"scalar", "bar"}, {"resolution", 64}, {"palette", "blue_red"}}},
      {"synth",
       {{"name", "synth"},
        {"duration", 10.0},
        {"sampling_rate", 500.0},
        {"montage", nullptr},
        {"targets", nullptr},
        {"channel_targets", Json::array()},
        {"noise_floor", 0.0},
        {"seed", 0},
        {"formats", Json::array({"csv"})}}},
      {"report", {{"dir", nullptr}, {"require", Json::array()}}},
      {"out", "."},
      {"format", nullptr},
      {"seed", nullptr},
      {"quiet", false},
  };
}

namespace {

bool Compatible(const Json& def, const Json& value) {
  if (def.is_null() || value.is_null()) return true;
  if (def.is_number()) return value.is_number();
  return def.type() == value.type();
}

// Free-form maps: empty objects in the defaults accept any key.
bool FreeForm(const Json& def) { return def.is_object() && def.empty(); }

void MergeInto(Json& config, const Json& layer, const std::string& path,
               std::string_view where) {
  for (auto it = layer.begin(); it != layer.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!config.contains(it.key()) && !FreeForm(config)) {
      UsageError(std::string(where) + ": unknown config key '" + key + "'");
    }
    Json& slot = config[it.key()];
    if (slot.is_object() && !slot.empty() && it.value().is_object()) {
      MergeInto(slot, it.value(), key, where);
      continue;
    }
    if (!Compatible(slot, it.value())) {
      UsageError(std::string(where) + ": key '" + key + "' expects " +
                 std::string(slot.type_name()) + ", got " +
                 std::string(it.value().type_name()));
    }
    slot = it.value();
  }
}

}  // namespace

void MergeLayer(Json& config, const Json& layer, std::string_view where) {
  if (!layer.is_object()) UsageError(std::string(where) + ": expected a JSON object");
  MergeInto(config, layer, "", where);
}

void ApplyOverride(Json& config, std::string_view dotted_key, std::string_view text) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(dotted_key)};
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) UsageError("malformed flag '--" + std::string(dotted_key) + "'");
    parts.push_back(part);
  }
  if (parts.empty()) UsageError("empty flag name");

  // Locate the existing leaf to learn its type.
  const Json* leaf = &config;
  for (const auto& p : parts) {
    if (leaf->is_object() && leaf->contains(p)) {
      leaf = &(*leaf)[p];
    } else if (FreeForm(*leaf)) {
      leaf = nullptr;
      break;
    } else {
      UsageError("unknown option '--" + std::string(dotted_key) + "'");
    }
  }

  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded() || (leaf && leaf->is_string() && !value.is_string())) {
    value = std::string(text);
  }

  Json layer = value;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    layer = Json{{*it, std::move(layer)}};
  }
  MergeLayer(config, layer, "--" + std::string(dotted_key));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) IoError("cannot read '" + path + "'");
  return buf.str();
}

Json ParseJson(std::string_view text, const std::string& origin) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) UsageError(origin + ": invalid JSON");
  return doc;
}

Json LoadConfigFile(const std::string& path) {
  Json doc = ParseJson(ReadFile(path), path);
  if (!doc.is_object()) UsageError(path + ": config must be a JSON object");
  if (!doc.contains("schema_version")) UsageError(path + ": missing schema_version");
  if (doc["schema_version"] != kSchemaVersion) {
    UsageError(path + ": unsupported schema_version " + doc["schema_version"].dump());
  }
  return doc;
}

}  // namespace barstress_cli
