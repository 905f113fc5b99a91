// Copyright 2026 The fqsvt Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fqsvt/cli.hpp"
#include "fqsvt/io.hpp"

namespace fs = std::filesystem;
using fqsvt::json;
namespace cli = fqsvt::cli;

namespace {

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fqsvt_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int run(const std::string& command, const std::string& config, const fs::path& out,
        std::uint64_t seed = 0) {
  std::ostringstream log;
  return cli::dispatch(command, json::parse(config), cli::Context{seed, out, &log, nullptr});
}

int run_main(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

// Every header cell carries a bracketed unit.
void expect_units(const fs::path& csv) {
  std::stringstream ss(first_line(csv));
  std::string cell;
  int cells = 0;
  while (std::getline(ss, cell, ',')) {
    ++cells;
    EXPECT_NE(cell.find(" ["), std::string::npos) << csv << ": " << cell;
    EXPECT_EQ(cell.back(), ']') << csv << ": " << cell;
  }
  EXPECT_GT(cells, 1);
}

const char* kSmallProject =
    R"({"model": {"type": "synthetic", "L": 2, "levels": 4, "gap": 0.25},
        "eps": 0.05, "mode": "sample", "trials": 50})";

}  // namespace

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(fqsvt::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(fqsvt::dump_json(json::parse("[0.1]")).find("0.10000000000000001") != std::string::npos, true);
}

TEST(ExitCodes, UnknownKeyIsConfigError) {
  EXPECT_EQ(run("phases", R"({"mu": 0.5, "delta": 0.3, "eps": 1e-3, "colour": 1})", fresh("unknown")),
            cli::kExitConfig);
  EXPECT_EQ(run("project", R"({"model": {"type": "synthetic", "L": 2, "extra": 0}})", fresh("unknown2")),
            cli::kExitConfig);
}

TEST(ExitCodes, InvalidFilterWindowIsConfigError) {
  EXPECT_EQ(run("phases", R"({"mu": 0.9, "delta": 0.3, "eps": 1e-3})", fresh("window")), cli::kExitConfig);
}

TEST(ExitCodes, BandViolationIsConfigError) {
  // Eigenvalue 0.5 sits on the threshold of the requested band centre.
  const char* cfg = R"({"model": {"type": "matrix", "matrix": {"rows": 2, "cols": 2,
                         "data": [[0.2, 0], [0, 0], [0, 0], [0.5, 0]]}},
                        "bands": {"method": "centers", "centers": [0.5], "delta": 0.1}})";
  EXPECT_EQ(run("project", cfg, fresh("violation")), cli::kExitConfig);
}

TEST(ExitCodes, BaselinesTooFewTrials) {
  EXPECT_EQ(run("baselines", R"({"L": [2], "trials": 10})", fresh("trials")), cli::kExitConfig);
}

TEST(ExitCodes, MainRejectsMissingConfigAndBadJson) {
  const fs::path out = fresh("main");
  EXPECT_EQ(run_main({"fqsvt", "phases", "--out", out.string()}), cli::kExitConfig);
  const fs::path bad = fresh("badjson");
  fs::create_directories(bad);
  std::ofstream(bad / "c.json") << "{\"mu\": ";
  EXPECT_EQ(run_main({"fqsvt", "phases", "--config", (bad / "c.json").string(), "--out", out.string()}),
            cli::kExitConfig);
  EXPECT_EQ(run_main({"fqsvt", "phases", "--config", (bad / "missing.json").string(), "--out", out.string()}),
            cli::kExitConfig);
}

TEST(Phases, CertifiesAndWritesArtifacts) {
  const fs::path out = fresh("phases");
  ASSERT_EQ(run("phases", R"({"mu": 0.5, "delta": 0.3, "eps": 1e-3})", out), cli::kExitOk);
  const json p = fqsvt::read_json_file(out / "phases.json");
  EXPECT_TRUE(p.at("certified").get<bool>());
  EXPECT_GT(p.at("degree").get<int>(), 0);
  EXPECT_EQ(p.at("degree").get<int>() % 2, 0);
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  expect_units(out / "certification.csv");
  expect_units(out / "synthesis_history.csv");
}

TEST(Project, SingleBandIsOneLeaf) {
  const fs::path out = fresh("single");
  ASSERT_EQ(run("project", R"({"model": {"type": "synthetic", "L": 1, "levels": 4, "gap": 0.5}, "eps": 0.01})", out),
            cli::kExitOk);
  const json tree = fqsvt::read_json_file(out / "tree.json");
  ASSERT_EQ(tree.at("leaves").size(), 1u);
  EXPECT_NEAR(tree.at("leaves")[0].at("prob").get<double>(), 1.0, 1e-12);
  expect_units(out / "distance.csv");
}

TEST(Project, SampleRunsAreByteIdentical) {
  const fs::path a = fresh("det_a");
  const fs::path b = fresh("det_b");
  ASSERT_EQ(run("project", kSmallProject, a, 7), cli::kExitOk);
  ASSERT_EQ(run("project", kSmallProject, b, 7), cli::kExitOk);
  for (const char* f : {"trajectories.csv", "histogram.csv", "summary.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  expect_units(a / "trajectories.csv");
  expect_units(a / "histogram.csv");
  const fs::path c = fresh("det_c");
  ASSERT_EQ(run("project", kSmallProject, c, 8), cli::kExitOk);
  EXPECT_NE(slurp(a / "trajectories.csv"), slurp(c / "trajectories.csv"));
}

TEST(Baselines, HeadersCarryUnits) {
  const fs::path out = fresh("baselines");
  ASSERT_EQ(run("baselines", R"({"L": [2, 4], "levels": 8, "gap": 0.1, "eps": 0.05, "trials": 1000})", out),
            cli::kExitOk);
  expect_units(out / "baselines.csv");
  EXPECT_NE(first_line(out / "baselines.csv").find("feedforward_binary_queries"), std::string::npos);
}

TEST(BoseHubbard, DeskInstanceGroups) {
  const fs::path out = fresh("bh");
  ASSERT_EQ(run("bosehubbard", "{}", out), cli::kExitOk);
  expect_units(out / "labels.csv");
  expect_units(out / "spectrum.csv");
  const json bands = fqsvt::read_json_file(out / "bands.json");
  EXPECT_EQ(bands.at("detected").at("L").get<int>(), 6);
}

TEST(Verify, SingleCriterion) {
  const fs::path out = fresh("verify");
  ASSERT_EQ(run("verify", R"({"quick": true, "criteria": [8]})", out), cli::kExitOk);
  expect_units(out / "verify.csv");
  EXPECT_EQ(run("verify", R"({"criteria": [11]})", fresh("verify_bad")), cli::kExitConfig);
}
