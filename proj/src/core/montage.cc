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

#include "core/montage.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "core/error.h"
#include "json.hpp"

namespace barstress {

namespace {

struct Placement {
  const char* label;
  double azimuth_deg;  // 0 = right ear, 90 = nose
  double polar_deg;    // angle from the vertex (Cz)
  ChannelKind kind;
};

// Idealised spherical placements; equator electrodes sit at polar 90 deg.
constexpr Placement kDefaultPlacements[] = {
    {"Fp1", 108, 90, ChannelKind::kEeg},  {"Fp2", 72, 90, ChannelKind::kEeg},
    {"F7", 144, 90, ChannelKind::kEeg},   {"F3", 129, 60, ChannelKind::kEeg},
    {"Fz", 90, 45, ChannelKind::kEeg},    {"F4", 51, 60, ChannelKind::kEeg},
    {"F8", 36, 90, ChannelKind::kEeg},    {"FT7", 162, 90, ChannelKind::kEeg},
    {"FC3", 148, 50, ChannelKind::kEeg},  {"FCz", 90, 22.5, ChannelKind::kEeg},
    {"FC4", 32, 50, ChannelKind::kEeg},   {"FT8", 18, 90, ChannelKind::kEeg},
    {"T7", 180, 90, ChannelKind::kEeg},   {"C3", 180, 45, ChannelKind::kEeg},
    {"Cz", 0, 0, ChannelKind::kEeg},      {"C4", 0, 45, ChannelKind::kEeg},
    {"T8", 0, 90, ChannelKind::kEeg},     {"TP7", 198, 90, ChannelKind::kEeg},
    {"CP3", 212, 50, ChannelKind::kEeg},  {"CPz", 270, 22.5, ChannelKind::kEeg},
    {"CP4", 328, 50, ChannelKind::kEeg},  {"TP8", 342, 90, ChannelKind::kEeg},
    {"P7", 216, 90, ChannelKind::kEeg},   {"P3", 231, 60, ChannelKind::kEeg},
    {"Pz", 270, 45, ChannelKind::kEeg},   {"P4", 309, 60, ChannelKind::kEeg},
    {"P8", 324, 90, ChannelKind::kEeg},   {"O1", 252, 90, ChannelKind::kEeg},
    {"Oz", 270, 90, ChannelKind::kEeg},   {"O2", 288, 90, ChannelKind::kEeg},
    {"M1", 200, 105, ChannelKind::kReference},
    {"M2", 340, 105, ChannelKind::kReference},
};

// Equator electrodes land at radius 0.9 so the disc keeps a margin.
constexpr double kEquatorRadius = 0.9;

Montage BuildDefault() {
  std::vector<ChannelInfo> electrodes;
  for (const auto& p : kDefaultPlacements) {
    const double r = std::min(1.0, kEquatorRadius * p.polar_deg / 90.0);
    const double az = p.azimuth_deg * std::numbers::pi / 180.0;
    ChannelInfo ch;
    ch.label = p.label;
    ch.position = {r * std::cos(az), r * std::sin(az)};
    ch.kind = p.kind;
    electrodes.push_back(std::move(ch));
  }
  return Montage("standard_1020_30", std::move(electrodes));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open montage file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const Montage& Montage::Default() {
  static const Montage kDefault = BuildDefault();
  return kDefault;
}

Montage MontageFromJson(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    Fail(ErrorCode::kInvalidMontage, "montage is not a JSON object");
  }
  try {
    std::vector<ChannelInfo> electrodes;
    for (const auto& e : doc.at("electrodes")) {
      ChannelInfo ch;
      ch.label = e.at("label").get<std::string>();
      ch.position = {e.at("x").get<double>(), e.at("y").get<double>()};
      const std::string kind = e.value("kind", std::string("eeg"));
      if (kind == "eeg") {
        ch.kind = ChannelKind::kEeg;
      } else if (kind == "reference") {
        ch.kind = ChannelKind::kReference;
      } else {
        Fail(ErrorCode::kInvalidMontage, "unknown electrode kind '" + kind + "'");
      }
      electrodes.push_back(std::move(ch));
    }
    return Montage(doc.value("name", std::string("custom")), std::move(electrodes));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidMontage, e.what());
  }
}

std::string MontageToJson(const Montage& montage) {
  nlohmann::ordered_json doc;
  doc["name"] = montage.name();
  doc["electrodes"] = nlohmann::ordered_json::array();
  for (const auto& e : montage.electrodes()) {
    doc["electrodes"].push_back(
        {{"label", e.label},
         {"x", e.position.x},
         {"y", e.position.y},
         {"kind", e.kind == ChannelKind::kEeg ? "eeg" : "reference"}});
  }
  return doc.dump(2);
}

Montage LoadMontage(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!name_or_path.empty() && fs::is_regular_file(name_or_path, ec)) {
    return MontageFromJson(ReadFile(name_or_path));
  }
  if (const char* dir = std::getenv("BARSTRESS_MONTAGE_DIR"); dir && *dir) {
    const fs::path candidate = fs::path(dir) / (name_or_path + ".json");
    if (fs::is_regular_file(candidate, ec)) {
      return MontageFromJson(ReadFile(candidate));
    }
  }
  if (name_or_path.empty() || name_or_path == "default") return Montage::Default();
  Fail(ErrorCode::kIo, "montage '" + name_or_path + "' not found");
}

}  // namespace barstress
