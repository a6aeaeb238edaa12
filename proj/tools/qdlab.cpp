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

// qdlab: runs one experiment and writes a canonical JSON report.
//
//   qdlab --group z2xz2 --lattice 5x5:plane --experiment smatrix --out s.json
//
// Tables are also written as CSV next to the report (<out>.<table>.csv).
// Exit status: 0 all checks pass, 1 some check fails, 2 bad input.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qdouble/experiments.hpp"
#include "qdouble/group.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-lattice quantum double simulator"};
  qd::RunConfig cfg;
  std::string config_path;
  auto* config_opt = app.add_option("--config", config_path, "JSON config file; flags override its values")
                         ->check(CLI::ExistingFile);
  auto* group_opt = app.add_option("--group", cfg.group, "z2, z3, z4, z2xz2, ...");
  auto* lattice_opt = app.add_option("--lattice", cfg.lattice, "WxH[:plane|:torus]");
  auto* exp_opt = app.add_option("--experiment", cfg.experiment, "experiment to run")
                      ->check(CLI::IsMember(qd::experiment_names()));
  auto* tol_opt = app.add_option("--tol", cfg.tol, "pass tolerance");
  auto* seed_opt = app.add_option("--seed", cfg.seed, "random seed");
  auto* cap_opt = app.add_option("--cap", cfg.cap, "ribbon length cap for cone spaces");
  auto* out_opt = app.add_option("--out", cfg.out, "report path (default: standard output)");
  auto* timing_opt = app.add_flag("--timing", cfg.timing, "include wall time in the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every usage error maps to 2.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*config_opt) {
      std::ifstream in(config_path);
      qd::RunConfig file = qd::config_from_json(qd::json::parse(in));
      // Flags given on the command line take precedence.
      if (!*group_opt) cfg.group = file.group;
      if (!*lattice_opt) cfg.lattice = file.lattice;
      if (!*exp_opt) cfg.experiment = file.experiment;
      if (!*tol_opt) cfg.tol = file.tol;
      if (!*seed_opt) cfg.seed = file.seed;
      if (!*cap_opt) cfg.cap = file.cap;
      if (!*out_opt) cfg.out = file.out;
      if (!*timing_opt) cfg.timing = file.timing;
    }
    const qd::Report report = qd::run(cfg);
    const std::string text = qd::to_canonical_json(report);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      write_file(cfg.out, text);
      for (const auto& [name, table] : report.tables) write_file(cfg.out + "." + name + ".csv", qd::table_csv(table));
    }
    return report.passed() ? 0 : 1;
  } catch (const qd::json::exception& e) {
    std::cerr << "qdlab: bad config file: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "qdlab: " << e.what() << "\n";
  }
  return 2;
}
