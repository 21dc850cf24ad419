// Copyright 2026 The trajcert Authors.
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


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support.hpp"
#include "trajcert/certificate_io.hpp"
#include "trajcert/cli.hpp"
#include "trajcert/config.hpp"
#include "trajcert/error.hpp"
#include "trajcert/trajectory_io.hpp"

namespace trajcert {
namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream(path) << j.dump(2) << "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Copy of a shipped example config that writes into `dir`.
std::string staged_config(const std::string& dir, const std::string& example,
                          void (*edit)(json&) = nullptr) {
  json j = read_json(testing::source_dir() + "/configs/" + example);
  j["output_dir"] = ".";
  if (edit) edit(j);
  const std::string path = dir + "/config.json";
  write_json(path, j);
  return path;
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string parse_error(const json& j) {
  try {
    parse_config(j, "cfg.json", ".");
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

json minimal_config() {
  return json::parse(R"({
    "system": {"name": "lotka_volterra", "tau": 0.2},
    "trajectories": [{"x0": [1, 1, 1, 1, 1], "horizon": 10}]
  })");
}

TEST(Config, MinimalParsesWithDefaults) {
  const Config c = parse_config(minimal_config(), "cfg.json", "/base");
  EXPECT_EQ(c.system.name, "lotka_volterra");
  EXPECT_EQ(c.trajectories.size(), 1u);
  EXPECT_EQ(c.trajectories[0].label, "1");
  EXPECT_EQ(c.settings.alpha, 2.0);
  EXPECT_EQ(c.settings.delta_u, 1e-6);
  EXPECT_EQ(c.settings.tail_window, 50u);
  EXPECT_FALSE(c.lipschitz.has_value());
  EXPECT_EQ(c.output_path(), "/base/out");
}

TEST(Config, ErrorsNameTheFieldPath) {
  json j = minimal_config();
  j["trajectories"][0]["x0"] = {1, 2};
  EXPECT_NE(parse_error(j).find("cfg.json: trajectories[0].x0"), std::string::npos) << parse_error(j);

  j = minimal_config();
  j["trajectories"][0]["colour"] = 1;
  EXPECT_NE(parse_error(j).find("trajectories[0].colour: unknown field"), std::string::npos);

  j = minimal_config();
  j["settings"] = {{"alpha", "two"}};
  EXPECT_NE(parse_error(j).find("settings.alpha"), std::string::npos);

  j = minimal_config();
  j["trajectories"][0]["epsilon"] = -1;
  EXPECT_NE(parse_error(j).find("trajectories[0].epsilon"), std::string::npos);

  j = minimal_config();
  j["trajectories"][0]["policy"] = "nope";
  EXPECT_NE(parse_error(j).find("unknown policy 'nope'"), std::string::npos);

  j = minimal_config();
  j.erase("trajectories");
  EXPECT_NE(parse_error(j).find("trajectories"), std::string::npos);

  j = minimal_config();
  j["system"]["name"] = "pendulum";
  EXPECT_NE(parse_error(j).find("pendulum"), std::string::npos);
}

TEST(Config, ShippedExamplesLoad) {
  for (const char* name : {"example1.json", "example2.json"}) {
    const Config c = load_config(testing::source_dir() + "/configs/" + name);
    EXPECT_EQ(c.trajectories.size(), 2u);
    EXPECT_TRUE(c.partition.has_value());
  }
  EXPECT_THROW(load_config("/nonexistent/config.json"), UsageError);
}

class CliExample1 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new std::string(testing::scratch_dir("cli_ex1"));
    cfg_ = new std::string(staged_config(*dir_, "example1.json"));
    ASSERT_EQ(cli({"simulate", "--config", *cfg_}).code, kExitOk);
  }
  static void TearDownTestSuite() {
    delete dir_;
    delete cfg_;
  }
  static std::string* dir_;
  static std::string* cfg_;
};
std::string* CliExample1::dir_ = nullptr;
std::string* CliExample1::cfg_ = nullptr;

TEST_F(CliExample1, VerifySucceedsAndWritesArtifacts) {
  const CliRun r = cli({"verify", "--config", *cfg_, "--runs", "50", "--lp-dump",
                     *dir_ + "/rows.lp"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("robustly safe"), std::string::npos);
  for (const char* f : {"certificate.json", "verify_report.json", "verify_report.txt", "rows.lp"}) {
    EXPECT_TRUE(std::filesystem::exists(*dir_ + "/" + f)) << f;
  }
  const LoadedCertificate cert = load_certificate(*dir_ + "/certificate.json");
  EXPECT_TRUE(cert.verify.ok);
  EXPECT_EQ(cert.record.mode, CertMode::Robust);
  EXPECT_EQ(cert.record.p.size(), 5u);
  // Parsing and re-serializing reproduces the file byte for byte.
  const std::string text = read_text(*dir_ + "/certificate.json");
  EXPECT_EQ(certificate_to_json(certificate_from_json(json::parse(text), "c")).dump(2) + "\n", text);
  EXPECT_EQ(cli({"validate", "--config", *cfg_, "--runs", "20"}).code, kExitOk);
  EXPECT_EQ(cli({"info", "--certificate", *dir_ + "/certificate.json"}).code, kExitOk);
}

TEST_F(CliExample1, TamperedCertificatesAreRejected) {
  ASSERT_EQ(cli({"verify", "--config", *cfg_, "--runs", "5"}).code, kExitOk);
  const std::string path = *dir_ + "/certificate.json";
  const json good = read_json(path);

  json bad = good;
  bad["trajectories"][0]["sha256"] = std::string(64, '0');
  const std::string hash_path = *dir_ + "/bad_hash.json";
  write_json(hash_path, bad);
  try {
    load_certificate(hash_path);
    ADD_FAILURE() << "hash mismatch accepted";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("does not match its recorded hash"), std::string::npos);
  }

  bad = good;
  bad["coefficients"]["a"] = 1.0;
  const std::string coef_path = *dir_ + "/bad_coef.json";
  write_json(coef_path, bad);
  try {
    load_certificate(coef_path);
    ADD_FAILURE() << "bad coefficient accepted";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("certificate rejected"), std::string::npos);
  }
  const CliRun v = cli({"validate", "--certificate", coef_path});
  EXPECT_EQ(v.code, kExitUsage);
}

TEST_F(CliExample1, EvalGrid) {
  ASSERT_EQ(cli({"verify", "--config", *cfg_, "--runs", "5"}).code, kExitOk);
  const std::string cert = *dir_ + "/certificate.json";
  const std::string csv = *dir_ + "/grid.csv";
  ASSERT_EQ(cli({"eval-grid", "--certificate", cert, "--resolution", "1", "--out", csv}).code,
            kExitOk);
  std::string text = read_text(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.rfind("x1,x2,value\n", 0), 0u);

  ASSERT_EQ(cli({"eval-grid", "--certificate", cert, "--resolution", "4", "--slice", "3,5",
                 "--out", csv}).code,
            kExitOk);
  text = read_text(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 17);
  EXPECT_EQ(text.rfind("x3,x5,value\n", 0), 0u);

  EXPECT_EQ(cli({"eval-grid", "--certificate", cert, "--slice", "1,9"}).code, kExitUsage);
  EXPECT_EQ(cli({"eval-grid", "--certificate", cert, "--slice", "2,2"}).code, kExitUsage);
}

TEST(Cli, CoarsePartitionIsInconclusive) {
  const std::string dir = testing::scratch_dir("cli_coarse");
  const std::string cfg = staged_config(dir, "example1.json", [](json& j) {
    j["partition"]["width"] = 5.0;
  });
  ASSERT_EQ(cli({"simulate", "--config", cfg}).code, kExitOk);
  const CliRun r = cli({"verify", "--config", cfg});
  EXPECT_EQ(r.code, kExitInconclusive);
  EXPECT_NE((r.out + r.err).find("inconclusive"), std::string::npos);
}

TEST(Cli, MissingLipschitzIsAUsageError) {
  const std::string dir = testing::scratch_dir("cli_nolip");
  const std::string cfg = staged_config(dir, "example1.json", [](json& j) { j.erase("lipschitz"); });
  ASSERT_EQ(cli({"simulate", "--config", cfg}).code, kExitOk);
  const CliRun r = cli({"verify", "--config", cfg});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("lipschitz"), std::string::npos) << r.err;
}

TEST(Cli, VerifyWithoutSimulateSuggestsIt) {
  const std::string dir = testing::scratch_dir("cli_nosim");
  const std::string cfg = staged_config(dir, "example1.json");
  const CliRun r = cli({"verify", "--config", cfg});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("simulate"), std::string::npos);
}

TEST(Cli, ZeroHorizonSimulationStoresOneState) {
  const std::string dir = testing::scratch_dir("cli_zero");
  const std::string cfg = staged_config(dir, "example1.json", [](json& j) {
    for (auto& t : j["trajectories"]) t["horizon"] = 0;
  });
  ASSERT_EQ(cli({"simulate", "--config", cfg}).code, kExitOk);
  const Trajectory t = read_trajectory_json(dir + "/traj1.json");
  EXPECT_EQ(t.horizon(), 0u);
  EXPECT_EQ(t.state(0)[0], 1.46);
}

TEST(Cli, SynthesizeProducesUniformBoxes) {
  const std::string dir = testing::scratch_dir("cli_ex2");
  const std::string cfg = staged_config(dir, "example2.json");
  ASSERT_EQ(cli({"simulate", "--config", cfg}).code, kExitOk);
  const CliRun r = cli({"synthesize", "--config", cfg, "--runs", "20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("pattern Kp={1} Kq={2}"), std::string::npos) << r.out;
  const json ctrl = read_json(dir + "/controller.json");
  EXPECT_EQ(ctrl["empty_cells"], 0);
  EXPECT_EQ(ctrl["uniform_box"]["lower"], json({9.0, 0.5}));
  EXPECT_EQ(ctrl["uniform_box"]["upper"], json({9.0, 0.6}));
  const CliRun m = cli({"synthesize", "--config", cfg, "--runs", "20", "--milp"});
  EXPECT_EQ(m.code, kExitOk) << m.err;
  EXPECT_EQ(read_json(dir + "/controller.json"), ctrl);
  EXPECT_EQ(cli({"validate", "--config", cfg, "--runs", "20"}).code, kExitOk);
}

TEST(Cli, NominalInputIsProjectedIntoTheBoxes) {
  const std::string dir = testing::scratch_dir("cli_nominal");
  const std::string cfg = staged_config(dir, "example2.json", [](json& j) {
    j["nominal"] = {10.0, 0.0};
  });
  ASSERT_EQ(cli({"simulate", "--config", cfg}).code, kExitOk);
  ASSERT_EQ(cli({"synthesize", "--config", cfg, "--runs", "20"}).code, kExitOk);
  const json ctrl = read_json(dir + "/controller.json");
  EXPECT_EQ(ctrl["nominal"], json({10.0, 0.0}));
  for (const auto& b : ctrl["boxes"]) EXPECT_EQ(b["selected"], json({9.0, 0.5}));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"verify"}).code, kExitUsage);
  EXPECT_EQ(cli({"verify", "--config", "/nonexistent.json"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  const CliRun info = cli({"info"});
  EXPECT_EQ(info.code, kExitOk);
  EXPECT_NE(info.out.find("lotka_volterra"), std::string::npos);
}

}  // namespace
}  // namespace trajcert
