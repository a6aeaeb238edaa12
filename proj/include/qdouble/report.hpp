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

#ifndef QDOUBLE_REPORT_HPP_
#define QDOUBLE_REPORT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdouble/lattice.hpp"

namespace qd {

using json = nlohmann::json;

struct RunConfig {
  std::string group = "z2";
  std::string lattice = "3x3:plane";
  std::string experiment = "verify";
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int cap = 6;
  std::string out;      // empty: standard output
  bool timing = false;  // adds wall_time to the report (breaks byte equality)
};

// Throws std::invalid_argument on unknown keys, wrong types, tol <= 0 or
// cap < 1.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);
void validate(const RunConfig& c);

struct Check {
  std::string name;
  std::string anchor;  // the result being checked, or "plumbing"
  bool pass = false;
  double max_error = 0.0;
  json details = json::object();
};

// pass iff max_error <= tol.
Check make_check(std::string name, std::string anchor, double max_error, double tol, json details = json::object());

struct Report {
  std::string experiment;
  RunConfig config;
  std::vector<Check> checks;
  std::map<std::string, json> tables;  // each: {"columns": [...], "rows": [[...], ...]}
  double wall_time = 0.0;

  bool passed() const;
};

json report_to_json(const Report& r);
// Sorted keys, two-space indentation, floats at 12 significant digits,
// non-finite numbers as null. Ends with a newline.
std::string canonical_dump(const json& j);
std::string to_canonical_json(const Report& r);
// One CSV document per table; complex cells are written as "re+imi".
std::string table_csv(const json& table);

// "WxH", "WxH:plane" or "WxH:torus"; case-insensitive.
Lattice parse_lattice(std::string_view spec);
std::string format_lattice(const Lattice& lat);

}  // namespace qd

#endif  // QDOUBLE_REPORT_HPP_
