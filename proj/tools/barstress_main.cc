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

// barstress: EEG beta/alpha ratio pipeline.
//
//   barstress synth spec.json --out run
//   barstress bar run/synth.csv --protocol.phase baseline --out run
//   barstress fit run/bar_points.csv --model both --out run
//   barstress report --out run
//
// Any config key can be set from the command line as --<dotted.key> VALUE.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "barstress/barstress.h"
#include "cli_commands.h"
#include "cli_config.h"

namespace {

using barstress_cli::Json;

// Flags owned by CLI11; every other --flag is a config override.
const std::set<std::string> kGlobalFlags = {"--config", "--out", "--format", "--seed",
                                            "--quiet", "--help",  "--version"};

// Convenience spellings for common keys.
const std::map<std::string, std::string> kAliases = {
    {"model", "fit.model"}, {"scalar", "topo.scalar"}, {"points", "fit.points"}};

struct SplitArgs {
  std::vector<std::string> cli;
  std::vector<std::pair<std::string, std::string>> overrides;
};

SplitArgs Split(int argc, char** argv) {
  SplitArgs out;
  out.cli.emplace_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0 || arg == "--") {
      out.cli.push_back(arg);
      continue;
    }
    const auto eq = arg.find('=');
    const std::string flag = arg.substr(0, eq);
    if (kGlobalFlags.count(flag)) {
      out.cli.push_back(arg);
      continue;
    }
    std::string key = flag.substr(2);
    if (auto it = kAliases.find(key); it != kAliases.end()) key = it->second;
    std::string value = "true";
    if (eq != std::string::npos) {
      value = arg.substr(eq + 1);
    } else if (i + 1 < argc && std::string(argv[i + 1]).rfind("--", 0) != 0) {
      value = argv[++i];
    }
    out.overrides.emplace_back(key, value);
  }
  return out;
}

int Run(int argc, char** argv) {
  SplitArgs args = Split(argc, argv);

  CLI::App app{"barstress: EEG beta/alpha band power ratio analysis"};
  app.set_version_flag("--version", std::string(bs_version()));
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.footer(
      "Config keys can be overridden as --<dotted.key> VALUE, e.g. --welch.taper hann.\n"
      "Exit codes: 0 ok, 2 validation error, 3 IO error, 4 fit did not converge.");

  std::string config_path, out_dir, format;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration (schema_version 1)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Primary output format")
      ->check(CLI::IsMember({"csv", "json", "ppm"}));
  app.add_option("--seed", seed, "Random seed for synthesis");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  std::string positional;
  auto* psd = app.add_subcommand("psd", "Welch PSD per channel -> psd_<channel>.csv");
  psd->add_option("input", positional, "Recording (CSV or EDF)");
  auto* bar = app.add_subcommand("bar", "Band power ratio per epoch -> bar.csv, bar.json");
  bar->add_option("input", positional, "Recording (CSV or EDF)");
  auto* fit = app.add_subcommand("fit", "4PL / quartic regression -> fit.json");
  fit->add_option("points", positional, "Two-column CSV (x_minutes, y_ratio)");
  auto* topo = app.add_subcommand("topo", "Scalp maps per epoch + similarity matrix");
  topo->add_option("input", positional, "Recording (CSV or EDF)");
  auto* synth = app.add_subcommand("synth", "Synthetic EEG with known band powers");
  synth->add_option("spec", positional, "Synthesis spec (JSON)");
  auto* report = app.add_subcommand("report", "Aggregate prior artifacts -> report.json/.md");
  report->add_option("dir", positional, "Directory holding bar/fit/topo artifacts");

  std::vector<char*> cargv;
  for (auto& s : args.cli) cargv.push_back(s.data());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : barstress_cli::kExitUsage;
  }

  Json config = barstress_cli::DefaultConfig();
  if (!config_path.empty()) {
    barstress_cli::MergeLayer(config, barstress_cli::LoadConfigFile(config_path), config_path);
  }
  if (!positional.empty()) {
    if (*synth) {
      Json spec = barstress_cli::ParseJson(barstress_cli::ReadFile(positional), positional);
      if (!spec.is_object()) barstress_cli::UsageError(positional + ": expected a JSON object");
      if (spec.contains("schema_version")) {
        if (spec["schema_version"] != barstress_cli::kSchemaVersion) {
          barstress_cli::UsageError(positional + ": unsupported schema_version");
        }
        spec.erase("schema_version");
      }
      barstress_cli::MergeLayer(config, Json{{"synth", spec}}, positional);
    } else if (*fit) {
      config["fit"]["points"] = positional;
    } else if (*report) {
      config["report"]["dir"] = positional;
    } else {
      config["input"] = positional;
    }
  }
  for (const auto& [key, value] : args.overrides) {
    barstress_cli::ApplyOverride(config, key, value);
  }
  if (!out_dir.empty()) config["out"] = out_dir;
  if (!format.empty()) config["format"] = format;
  if (seed) config["seed"] = *seed;
  if (quiet) config["quiet"] = true;

  if (*psd) return barstress_cli::RunPsd(config);
  if (*bar) return barstress_cli::RunBar(config);
  if (*fit) return barstress_cli::RunFit(config);
  if (*topo) return barstress_cli::RunTopo(config);
  if (*synth) return barstress_cli::RunSynth(config);
  return barstress_cli::RunReport(config);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const barstress_cli::CliError& e) {
    std::cerr << "barstress: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "barstress: error: invalid configuration value: " << e.what() << "\n";
    return barstress_cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "barstress: error: " << e.what() << "\n";
    return 1;
  }
}
