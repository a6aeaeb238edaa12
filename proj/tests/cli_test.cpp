// Copyright 2026 The qdouble Authors
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

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qdouble/experiments.hpp"
#include "qdouble/report.hpp"

namespace qd {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qdlab_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with stdout captured to `stdout_name` inside the test dir.
  int qdlab(const std::string& args, const std::string& stdout_name = "stdout.txt") {
    const std::string cmd = std::string(QD_CLI_PATH) + " " + args + " > " + (dir_ / stdout_name).string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ReportsAreByteIdentical) {
  const std::string args = "--group z3 --lattice 5x5 --experiment split-check --seed 7";
  ASSERT_EQ(qdlab(args + " --out " + path("a.json")), 0);
  ASSERT_EQ(qdlab(args + " --out " + path("b.json")), 0);
  ASSERT_EQ(qdlab(args, "c.json"), 0);
  const std::string a = slurp(path("a.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b.json")));
  EXPECT_EQ(a, slurp(path("c.json")));
}

TEST_F(CliTest, ReportsMatchTheSchema) {
  if (std::system("python3 -c 'import jsonschema' > /dev/null 2>&1") != 0) GTEST_SKIP() << "jsonschema unavailable";
  const std::vector<std::string> runs = {
      "--group z2 --lattice 3x3:torus --experiment verify",
      "--group z3 --lattice 2x2:torus --experiment groundstate",
      "--group z2 --lattice 3x3 --experiment haag-check",
      "--group z2 --lattice 5x5 --experiment split-check",
      "--group z2xz2 --lattice 5x5 --experiment fusion",
      "--group z4 --lattice 5x5 --experiment braid",
      "--group z2 --lattice 5x5 --experiment smatrix --timing",
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string out = path("r" + std::to_string(i) + ".json");
    ASSERT_EQ(qdlab(runs[i] + " --out " + out), 0) << runs[i] << "\n" << slurp(dir_ / "stderr.txt");
    const std::string cmd = "python3 -c 'import json, sys, jsonschema; "
                            "jsonschema.validate(json.load(open(sys.argv[2])), json.load(open(sys.argv[1])))' " +
                            std::string(QD_SCHEMA_PATH) + " " + out;
    EXPECT_EQ(std::system(cmd.c_str()), 0) << runs[i];
    const json j = json::parse(slurp(out));
    EXPECT_EQ(j.at("status"), "pass");
    EXPECT_EQ(j.contains("wall_time"), runs[i].find("--timing") != std::string::npos);
  }
}

TEST_F(CliTest, BadInputExitsWithTwo) {
  EXPECT_EQ(qdlab("--group z0 --lattice 5x5 --experiment braid"), 2);
  EXPECT_EQ(qdlab("--group z2 --lattice 5y5 --experiment braid"), 2);
  EXPECT_EQ(qdlab("--group z2 --lattice 5x5 --experiment teleport"), 2);
  EXPECT_EQ(qdlab("--group z2 --lattice 5x5 --experiment braid --tol -1"), 2);
  EXPECT_EQ(qdlab("--group z2 --lattice 2x2 --experiment braid"), 2);
  EXPECT_EQ(qdlab("--config " + path("missing.json")), 2);
  EXPECT_EQ(qdlab("--bogus"), 2);
  std::ofstream(path("bad.json")) << R"({"group": "z2", "colour": "red"})";
  EXPECT_EQ(qdlab("--config " + path("bad.json")), 2);
  std::ofstream(path("broken.json")) << "{";
  EXPECT_EQ(qdlab("--config " + path("broken.json")), 2);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("qdlab:"), std::string::npos);
  EXPECT_EQ(qdlab("--help"), 0);
}

TEST_F(CliTest, FailingCheckExitsWithOne) {
  // Split-check errors are rounding-sized, so a tolerance far below them fails.
  EXPECT_EQ(qdlab("--group z3 --lattice 5x5 --experiment split-check --tol 1e-300 --out " + path("f.json")), 1);
  EXPECT_EQ(json::parse(slurp(path("f.json"))).at("status"), "fail");
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  std::ofstream(path("cfg.json")) << R"({"group": "z2", "lattice": "5x5:plane", "experiment": "braid", "seed": 3})";
  ASSERT_EQ(qdlab("--config " + path("cfg.json"), "from_file.json"), 0);
  ASSERT_EQ(qdlab("--group z2 --lattice 5x5:plane --experiment braid --seed 3", "from_flags.json"), 0);
  EXPECT_EQ(slurp(dir_ / "from_file.json"), slurp(dir_ / "from_flags.json"));
  ASSERT_EQ(qdlab("--config " + path("cfg.json") + " --group z3 --seed 9", "override.json"), 0);
  const json j = json::parse(slurp(dir_ / "override.json"));
  EXPECT_EQ(j.at("config").at("group"), "z3");
  EXPECT_EQ(j.at("config").at("seed"), 9);
  EXPECT_EQ(j.at("config").at("lattice"), "5x5:plane");
}

TEST_F(CliTest, TablesAreWrittenAsCsv) {
  ASSERT_EQ(qdlab("--group z2 --lattice 5x5 --experiment smatrix --out " + path("s.json")), 0);
  const json j = json::parse(slurp(path("s.json")));
  ASSERT_FALSE(j.at("tables").empty());
  for (const auto& [name, table] : j.at("tables").items()) {
    const std::string csv = slurp(path("s.json." + name + ".csv"));
    ASSERT_FALSE(csv.empty()) << name;
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    EXPECT_EQ(lines, table.at("rows").size() + 1) << name;
    EXPECT_EQ(csv.substr(0, csv.find('\n')), table_csv(table).substr(0, csv.find('\n')));
  }
}

TEST(ReportTest, CanonicalDumpSortsKeys) {
  const json j = json::parse(R"({"b": 1, "a": {"d": [1.5, "x"], "c": null}})");
  const std::string s = canonical_dump(j);
  EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
  EXPECT_LT(s.find("\"c\""), s.find("\"d\""));
  EXPECT_EQ(json::parse(s), j);
  EXPECT_EQ(s.back(), '\n');
}

TEST(ReportTest, ConfigRoundTripAndValidation) {
  RunConfig c;
  c.group = "z2xz2";
  c.lattice = "4x4:torus";
  c.seed = 42;
  const RunConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(back.group, c.group);
  EXPECT_EQ(back.lattice, c.lattice);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_THROW(config_from_json(json::parse(R"({"tol": 0})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::parse(R"({"cap": "six"})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(json::array()), std::invalid_argument);
}

TEST(ReportTest, LatticeSpecs) {
  const Lattice a = parse_lattice("4x3");
  EXPECT_EQ(a.width(), 4);
  EXPECT_EQ(a.height(), 3);
  EXPECT_FALSE(a.torus());
  EXPECT_TRUE(parse_lattice("3X3:TORUS").torus());
  EXPECT_THROW(parse_lattice("4x"), ParseError);
  EXPECT_THROW(parse_lattice("0x3"), ParseError);
  EXPECT_THROW(parse_lattice("3x3:klein"), ParseError);
  EXPECT_THROW(parse_lattice("3x3 "), ParseError);
}

TEST(ReportTest, RunMatchesTheCanonicalForm) {
  RunConfig c;
  c.group = "z2";
  c.lattice = "5x5";
  c.experiment = "fusion";
  EXPECT_EQ(to_canonical_json(run(c)), to_canonical_json(run(c)));
  c.experiment = "nonsense";
  EXPECT_THROW(run(c), UnknownExperiment);
}

}  // namespace
}  // namespace qd
