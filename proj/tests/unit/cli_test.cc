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

// Runs the barstress executable as a subprocess and inspects its files.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "barstress/barstress.h"
#include "cli_config.h"
#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;
using barstress_cli::Json;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

Json ReadJson(const fs::path& p) { return Json::parse(Slurp(p)); }

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("barstress_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    // Three midline electrodes keep hour-long recordings small.
    Spit(dir_ / "mini.json", R"({"name": "mini", "electrodes": [
      {"label": "Fz", "x": 0.0, "y": 0.4},
      {"label": "Cz", "x": 0.0, "y": 0.0},
      {"label": "Pz", "x": 0.0, "y": -0.4}]})");
  }
  void TearDown() override {
    if (!HasFailure()) fs::remove_all(dir_);
  }

  RunResult Run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && BARSTRESS_MONTAGE_DIR='" +
                            dir_.string() + "' '" BARSTRESS_CLI_PATH "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  // Writes a synth spec and runs `synth`; returns the recording path.
  std::string Synth(const std::string& name, const Json& spec, const std::string& extra = "") {
    Spit(dir_ / (name + ".spec.json"), spec.dump());
    const RunResult r = Run("synth " + name + ".spec.json --synth.name " + name + " --quiet " +
                            extra);
    EXPECT_EQ(r.code, 0) << r.err;
    const auto formats = spec.value("formats", Json::array({"csv"}));
    return name + "." + formats[0].get<std::string>();
  }

  fs::path dir_;
};

Json BaselineSpec(double duration = 10.0, double fs = 500.0) {
  return Json{{"duration", duration},
              {"sampling_rate", fs},
              {"targets", {{"alpha", 4.329}, {"beta", 3.034}}}};
}

TEST_F(CliTest, VersionAndHelp) {
  EXPECT_EQ(Run("--version").code, 0);
  EXPECT_EQ(Run("--help").code, 0);
  EXPECT_EQ(Run("").code, 2);
  EXPECT_EQ(Run("frobnicate").code, 2);
}

TEST_F(CliTest, PsdWritesOneFilePerChannel) {
  Json spec = BaselineSpec(10.0, 100.0);
  spec["montage"] = "mini";
  spec["targets"] = {{"alpha", 5.0}};
  const std::string rec = Synth("alpha", spec);
  const RunResult r = Run("psd " + rec + " --montage mini --sampling_rate 100 --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* label : {"Fz", "Cz", "Pz"}) {
    const fs::path p = dir_ / ("psd_" + std::string(label) + ".csv");
    ASSERT_TRUE(fs::exists(p)) << p;
    std::istringstream in(Slurp(p));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "frequency_hz,power_uv2_per_hz");
    double best_f = 0.0, best_p = -1.0;
    while (std::getline(in, line)) {
      const double f = std::stod(line.substr(0, line.find(',')));
      const double p = std::stod(line.substr(line.find(',') + 1));
      if (p > best_p) {
        best_p = p;
        best_f = f;
      }
    }
    EXPECT_GE(best_f, 8.0);
    EXPECT_LE(best_f, 13.0);
  }
}

TEST_F(CliTest, PsdChannelSubsetAndJson) {
  Json spec = BaselineSpec(10.0, 100.0);
  spec["montage"] = "mini";
  const std::string rec = Synth("b", spec);
  ASSERT_EQ(Run("psd " + rec + " --montage mini --channels '[\"Cz\"]' --quiet").code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "psd_Cz.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "psd_Fz.csv"));
  ASSERT_EQ(Run("psd " + rec + " --montage mini --format json --out j --quiet").code, 0);
  const Json doc = ReadJson(dir_ / "j" / "psd.json");
  EXPECT_EQ(doc["schema_version"], 1);
}

TEST_F(CliTest, MissingInputIsAnIoError) {
  const RunResult r = Run("psd does_not_exist.csv --sampling_rate 500");
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, BaselineBarOnSyntheticData) {
  const std::string rec = Synth("base", BaselineSpec());
  const RunResult r = Run("bar " + rec + " --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = ReadJson(dir_ / "bar.json");
  ASSERT_EQ(doc["points"].size(), 1u);
  EXPECT_NEAR(doc["points"][0]["bar"].get<double>(), 0.701, 0.035);
  EXPECT_EQ(doc["protocol"]["phase"], "baseline");
  // A baseline run is its own baseline.
  EXPECT_NEAR(doc["baseline"].get<double>(), doc["points"][0]["bar"].get<double>(), 1e-15);
  const std::string csv = Slurp(dir_ / "bar.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "time_s,bar,phase,game_type,gamer_type,music_type,baseline,relative_increase");
}

TEST_F(CliTest, BarFromEdfInput) {
  Json spec = BaselineSpec();
  spec["formats"] = {"edf"};
  const std::string rec = Synth("base", spec);
  const RunResult r = Run("bar " + rec + " --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(ReadJson(dir_ / "bar.json")["points"][0]["bar"].get<double>(), 0.701, 0.035);
}

TEST_F(CliTest, DuringPhaseDefaultsGiveFourRows) {
  Json spec = BaselineSpec(3610.0, 100.0);
  spec["montage"] = "mini";
  spec["formats"] = {"edf"};
  const std::string rec = Synth("during", spec);
  const RunResult r = Run("bar " + rec +
                          " --montage mini --protocol.phase during_gameplay"
                          " --protocol.game_type puzzle --baseline 0.701 --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = ReadJson(dir_ / "bar.json");
  ASSERT_EQ(doc["points"].size(), 4u);
  const double minutes[] = {15, 30, 45, 60};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(doc["points"][i]["minutes"].get<double>(), minutes[i]);
    EXPECT_TRUE(doc["points"][i]["relative_increase"].is_number());
  }
  // The points file carries the baseline at minute 0 and feeds `fit`.
  const std::string pts = Slurp(dir_ / "bar_points.csv");
  EXPECT_EQ(pts.substr(0, pts.find('\n', pts.find('\n') + 1)), "x_minutes,y_ratio\n0,0.701");
  const RunResult fit = Run("fit bar_points.csv --quiet");
  EXPECT_EQ(fit.code, 0) << fit.err;
}

TEST_F(CliTest, AfterPhaseDefaultsGiveFiveRows) {
  Json spec = BaselineSpec(730.0, 100.0);
  spec["montage"] = "mini";
  spec["formats"] = {"edf"};
  const std::string rec = Synth("after", spec);
  const RunResult r = Run("bar " + rec +
                          " --montage mini --protocol.phase after_gameplay"
                          " --protocol.music_type low_pitch --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = ReadJson(dir_ / "bar.json");
  ASSERT_EQ(doc["points"].size(), 5u);
  const double minutes[] = {0, 3, 6, 9, 12};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(doc["points"][i]["minutes"].get<double>(), minutes[i]);
  }
  EXPECT_EQ(doc["protocol"]["music_type"], "low_pitch");
  // Music labels outside the after phase are rejected.
  EXPECT_EQ(Run("bar " + rec + " --montage mini --protocol.music_type low_pitch --quiet").code,
            2);
}

TEST_F(CliTest, FitStrategicNonGamer) {
  Spit(dir_ / "pts.csv", "x_minutes,y_ratio\n0,0.701\n15,1.337\n30,1.426\n45,1.856\n60,2.403\n");
  const RunResult r = Run("fit pts.csv --model 4pl --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = ReadJson(dir_ / "fit.json");
  // Compared at the four decimals the reference value is printed with.
  EXPECT_GE(std::round(doc["models"]["4pl"]["r_squared"].get<double>() * 1e4) / 1e4, 0.9605);
  EXPECT_TRUE(doc["converged"].get<bool>());
  EXPECT_FALSE(doc["models"].contains("quartic"));
  EXPECT_FALSE(doc.contains("comparison"));
}

TEST_F(CliTest, FitBothReportsInterpolationWarning) {
  Spit(dir_ / "pts.csv", "0,0.701\n15,0.729\n30,0.874\n45,1.297\n60,1.541\n");
  ASSERT_EQ(Run("fit pts.csv --quiet").code, 0);
  const Json doc = ReadJson(dir_ / "fit.json");
  EXPECT_EQ(doc["comparison"]["criterion"], "aic");
  EXPECT_EQ(doc["comparison"]["ranking"][0], "quartic");
  EXPECT_TRUE(doc["comparison"]["overfit_warning"].get<bool>());
  EXPECT_TRUE(doc["comparison"].contains("warning"));
  EXPECT_TRUE(doc["models"]["quartic"]["aic"].is_null());
  EXPECT_NEAR(doc["models"]["4pl"]["aic"].get<double>(), -27.47, 0.5);
}

TEST_F(CliTest, FitErrors) {
  Spit(dir_ / "empty.csv", "");
  EXPECT_EQ(Run("fit empty.csv --quiet").code, 2);
  Spit(dir_ / "bad.csv", "0,1\n1,x\n");
  EXPECT_EQ(Run("fit bad.csv --quiet").code, 2);
  EXPECT_EQ(Run("fit missing.csv --quiet").code, 3);
  Spit(dir_ / "pts.csv", "0,0.701\n15,0.729\n30,0.874\n45,1.297\n60,1.541\n");
  EXPECT_EQ(Run("fit pts.csv --model cubic --quiet").code, 2);
}

TEST_F(CliTest, FitNonConvergenceExitsFourWithOutput) {
  Spit(dir_ / "pts.csv", "0,0.701\n15,0.729\n30,0.874\n45,1.297\n60,1.541\n");
  const RunResult r = Run("fit pts.csv --model 4pl --fit.max_iterations 1 --quiet");
  EXPECT_EQ(r.code, 4);
  const Json doc = ReadJson(dir_ / "fit.json");
  EXPECT_FALSE(doc["converged"].get<bool>());
}

TEST_F(CliTest, TopoSingleEpoch) {
  const std::string rec = Synth("base", BaselineSpec());
  const RunResult r = Run("topo " + rec + " --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "topo_0.ppm"));
  EXPECT_TRUE(fs::exists(dir_ / "topo_0.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "topo_1.ppm"));
  const Json doc = ReadJson(dir_ / "topo.json");
  ASSERT_EQ(doc["similarity"].size(), 1u);
  EXPECT_EQ(doc["similarity"][0][0].get<double>(), 1.0);
  EXPECT_EQ(Slurp(dir_ / "similarity.csv"), "time_s,0\n0,1\n");
}

TEST_F(CliTest, TopoTwoIdenticalEpochs) {
  // Comb tones sit at half-integer frequencies, so a noiseless synthetic
  // recording repeats every 2 s and the epochs at 0 and 10 s coincide.
  const std::string rec = Synth("base", BaselineSpec(20.0, 500.0));
  const RunResult r =
      Run("topo " + rec + " --protocol.epoch_times '[0, 10]' --scalar band:beta --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = ReadJson(dir_ / "topo.json");
  ASSERT_EQ(doc["similarity"].size(), 2u);
  EXPECT_NEAR(doc["similarity"][0][1].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(doc["scalar"], "band:beta");
  const Json& v0 = doc["epochs"][0]["values"];
  const Json& v1 = doc["epochs"][1]["values"];
  for (auto it = v0.begin(); it != v0.end(); ++it) {
    const double a = it.value().get<double>();
    EXPECT_NEAR(v1[it.key()].get<double>(), a, 1e-9 * a) << it.key();
  }
}

TEST_F(CliTest, TopoFrontalHotspot) {
  Json spec = BaselineSpec();
  spec["channel_targets"] = Json::array();
  for (const char* l : {"Fp1", "Fp2", "Fz"}) {
    spec["channel_targets"].push_back({{"label", l}, {"band", "beta"}, {"power", 12.0}});
  }
  const std::string rec = Synth("hot", spec);
  ASSERT_EQ(Run("topo " + rec + " --quiet").code, 0);
  // Locate the hottest grid cell.
  std::istringstream in(Slurp(dir_ / "topo_0.csv"));
  std::string line;
  int best_r = -1, best_c = -1;
  double best = -INFINITY;
  for (int row = 0; std::getline(in, line); ++row) {
    std::stringstream cells(line);
    std::string cell;
    for (int col = 0; std::getline(cells, cell, ','); ++col) {
      if (cell.empty()) continue;
      if (const double v = std::stod(cell); v > best) {
        best = v;
        best_r = row;
        best_c = col;
      }
    }
  }
  bs_montage* m = nullptr;
  ASSERT_EQ(bs_montage_load("default", &m), BS_OK);
  double nearest = INFINITY;
  for (std::size_t i = 0; i < bs_montage_electrode_count(m); ++i) {
    const std::string label = bs_montage_label(m, i);
    if (label != "Fp1" && label != "Fp2" && label != "Fz") continue;
    double x = 0, y = 0;
    bs_montage_position(m, i, &x, &y);
    const double r = std::floor((1.0 - y) / 2.0 * 64);
    const double c = std::floor((x + 1.0) / 2.0 * 64);
    nearest = std::min(nearest, std::hypot(r - best_r, c - best_c));
  }
  bs_montage_free(m);
  EXPECT_LE(nearest, 2.0);
}

TEST_F(CliTest, SynthErrorsAndDeterminism) {
  Json zero = BaselineSpec();
  zero["duration"] = 0;
  Spit(dir_ / "zero.json", zero.dump());
  EXPECT_EQ(Run("synth zero.json --quiet").code, 2);
  Spit(dir_ / "typo.json", R"({"durration": 10})");
  EXPECT_EQ(Run("synth typo.json --quiet").code, 2);
  Spit(dir_ / "broken.json", "{");
  EXPECT_EQ(Run("synth broken.json --quiet").code, 2);

  Json spec = BaselineSpec();
  spec["formats"] = {"csv", "edf"};
  spec["noise_floor"] = 0.001;
  Synth("a", spec, "--seed 7");
  Synth("b", spec, "--seed 7");
  Synth("c", spec, "--seed 8");
  EXPECT_EQ(Slurp(dir_ / "a.csv"), Slurp(dir_ / "b.csv"));
  EXPECT_EQ(Slurp(dir_ / "a.edf"), Slurp(dir_ / "b.edf"));
  EXPECT_NE(Slurp(dir_ / "a.csv"), Slurp(dir_ / "c.csv"));
  const Json meta = ReadJson(dir_ / "a.meta.json");
  EXPECT_EQ(meta["seed"], 7);
  EXPECT_NE(meta["generator"].get<std::string>().find("mt19937_64"), std::string::npos);
  EXPECT_EQ(meta["sampling_rate"], 500.0);
}

TEST_F(CliTest, ReportSectionsAndDeterminism) {
  const std::string rec = Synth("base", BaselineSpec());
  ASSERT_EQ(Run("bar " + rec + " --quiet").code, 0);
  ASSERT_EQ(Run("report --quiet").code, 0);
  Json doc = ReadJson(dir_ / "report.json");
  EXPECT_TRUE(doc["sections"]["bar"]["present"].get<bool>());
  EXPECT_FALSE(doc["sections"]["fits"]["present"].get<bool>());
  EXPECT_FALSE(doc["sections"]["topography"]["present"].get<bool>());

  Spit(dir_ / "pts.csv", "0,0.701\n15,0.729\n30,0.874\n45,1.297\n60,1.541\n");
  ASSERT_EQ(Run("fit pts.csv --quiet").code, 0);
  ASSERT_EQ(Run("topo " + rec + " --quiet").code, 0);
  ASSERT_EQ(Run("report --quiet").code, 0);
  doc = ReadJson(dir_ / "report.json");
  for (const char* s : {"bar", "fits", "topography"}) {
    EXPECT_TRUE(doc["sections"][s]["present"].get<bool>()) << s;
  }
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_TRUE(fs::exists(dir_ / "report.md"));
  EXPECT_TRUE(fs::exists(dir_ / "report.run.json"));
  const std::string first = Slurp(dir_ / "report.json");
  ASSERT_EQ(Run("report --quiet").code, 0);
  EXPECT_EQ(Slurp(dir_ / "report.json"), first);
}

TEST_F(CliTest, ReportMissingArtifacts) {
  fs::create_directories(dir_ / "empty");
  const RunResult r = Run("report empty --quiet");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("MissingArtifacts"), std::string::npos);
  Spit(dir_ / "pts.csv", "0,0.701\n15,0.729\n30,0.874\n45,1.297\n60,1.541\n");
  ASSERT_EQ(Run("fit pts.csv --quiet").code, 0);
  EXPECT_EQ(Run("report --report.require '[\"bar\"]' --quiet").code, 2);
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  const std::string rec = Synth("base", BaselineSpec());
  Json cfg{{"schema_version", 1},
           {"input", rec},
           {"welch", {{"taper", "hann"}, {"segment_count", 3}}},
           {"out", "cfg_out"},
           {"quiet", true}};
  Spit(dir_ / "run.json", cfg.dump());
  ASSERT_EQ(Run("bar --config run.json").code, 0);
  Json doc = ReadJson(dir_ / "cfg_out" / "bar.json");
  EXPECT_EQ(doc["welch"]["taper"], "hann");
  EXPECT_EQ(doc["welch"]["segment_count"], 3);
  // Flags win over the file.
  ASSERT_EQ(Run("bar --config run.json --welch.taper rectangular").code, 0);
  doc = ReadJson(dir_ / "cfg_out" / "bar.json");
  EXPECT_EQ(doc["welch"]["taper"], "rectangular");

  Spit(dir_ / "nover.json", R"({"input": "x.csv"})");
  EXPECT_EQ(Run("bar --config nover.json").code, 2);
  Spit(dir_ / "v2.json", R"({"schema_version": 2})");
  EXPECT_EQ(Run("bar --config v2.json").code, 2);
  EXPECT_EQ(Run("bar " + rec + " --welch.tapr hann").code, 2);
  EXPECT_EQ(Run("bar " + rec + " --welch.segment_count many").code, 2);
  EXPECT_EQ(Run("bar " + rec + " --welch.taper kaiser").code, 2);
  EXPECT_EQ(Run("bar --config missing.json").code, 3);
}

TEST_F(CliTest, CustomBandsAndThetaBetaRatio) {
  const std::string rec = Synth("base", BaselineSpec());
  const RunResult r = Run("bar " + rec +
                          " --ratio.numerator theta --ratio.denominator beta"
                          " --bands '{\"theta\": [4, 8]}' --quiet");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = ReadJson(dir_ / "bar.json");
  EXPECT_EQ(doc["ratio"]["numerator"]["name"], "theta");
  EXPECT_LT(doc["points"][0]["bar"].get<double>(), 0.01);  // no theta power synthesized
}

// In-process checks of the configuration layering.
TEST(CliConfigTest, MergeAndOverride) {
  Json cfg = barstress_cli::DefaultConfig();
  barstress_cli::ApplyOverride(cfg, "welch.window_len", "5");
  EXPECT_EQ(cfg["welch"]["window_len"].get<double>(), 5.0);
  barstress_cli::ApplyOverride(cfg, "welch.taper", "hann");
  EXPECT_EQ(cfg["welch"]["taper"], "hann");
  barstress_cli::ApplyOverride(cfg, "channels", "[\"Fz\",\"Cz\"]");
  EXPECT_EQ(cfg["channels"].size(), 2u);
  barstress_cli::ApplyOverride(cfg, "montage", "123");
  EXPECT_EQ(cfg["montage"], "123");  // string leaves stay strings
  EXPECT_THROW(barstress_cli::ApplyOverride(cfg, "welch.nope", "1"), barstress_cli::CliError);
  EXPECT_THROW(barstress_cli::ApplyOverride(cfg, "welch.segment_count", "abc"),
               barstress_cli::CliError);
  try {
    barstress_cli::MergeLayer(cfg, Json{{"unknown", 1}}, "test");
    FAIL() << "expected CliError";
  } catch (const barstress_cli::CliError& e) {
    EXPECT_EQ(e.exit_code(), barstress_cli::kExitUsage);
  }
  barstress_cli::MergeLayer(cfg, Json{{"bands", {{"mu", {8, 12}}}}}, "test");
  EXPECT_EQ(cfg["bands"]["mu"][1], 12);
}

}  // namespace
