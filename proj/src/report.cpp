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

#include "qdouble/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qdouble/group.hpp"

namespace qd {

namespace {

const char* const kConfigKeys[] = {"group", "lattice", "experiment", "tol", "seed", "cap", "out", "timing"};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  // Keep floats recognisable as such; -0 prints as 0.
  if (s == "-0") s = "0";
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        dump(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += inner;
        dump(x, indent + 1, out);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

json check_to_json(const Check& c) {
  return json{{"name", c.name},
              {"anchor", c.anchor},
              {"status", c.pass ? "pass" : "fail"},
              {"max_error", c.max_error},
              {"details", c.details}};
}

std::string csv_cell(const json& x) {
  if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
    const double re = x[0].get<double>();
    const double im = x[1].get<double>();
    return format_double(re) + (im < 0 ? "" : "+") + format_double(im) + "i";
  }
  if (x.is_string()) {
    const std::string s = x.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (x.is_number_float()) return format_double(x.get<double>());
  return x.dump();
}

}  // namespace

void validate(const RunConfig& c) {
  if (!(c.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (c.cap < 1) throw std::invalid_argument("ribbon-length cap must be at least 1");
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(kConfigKeys), std::end(kConfigKeys), it.key()) == std::end(kConfigKeys)) {
      throw std::invalid_argument("unknown config key '" + it.key() + "'");
    }
  }
  RunConfig c;
  try {
    if (j.contains("group")) c.group = j.at("group").get<std::string>();
    if (j.contains("lattice")) c.lattice = j.at("lattice").get<std::string>();
    if (j.contains("experiment")) c.experiment = j.at("experiment").get<std::string>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cap")) c.cap = j.at("cap").get<int>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  validate(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  // The output path is not part of the echo: it does not change results.
  return json{{"group", c.group},
              {"lattice", c.lattice},
              {"experiment", c.experiment},
              {"tol", c.tol},
              {"seed", c.seed},
              {"cap", c.cap}};
}

Check make_check(std::string name, std::string anchor, double max_error, double tol, json details) {
  Check c{std::move(name), std::move(anchor), std::isfinite(max_error) && max_error <= tol, max_error,
          std::move(details)};
  return c;
}

bool Report::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json report_to_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(check_to_json(c));
  json tables = json::object();
  for (const auto& [name, t] : r.tables) tables[name] = t;
  json out{{"experiment", r.experiment},
           {"config", config_to_json(r.config)},
           {"checks", checks},
           {"tables", tables},
           {"status", r.passed() ? "pass" : "fail"}};
  if (r.config.timing) out["wall_time"] = r.wall_time;
  return out;
}

std::string canonical_dump(const json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

std::string to_canonical_json(const Report& r) { return canonical_dump(report_to_json(r)); }

std::string table_csv(const json& table) {
  std::string out;
  const auto& cols = table.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + csv_cell(cols[i]);
  out += "\n";
  for (const auto& row : table.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

Lattice parse_lattice(std::string_view spec) {
  std::string s;
  for (char c : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t pos = 0;
  auto number = [&]() {
    const std::size_t start = pos;
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > 1000) throw ParseError("lattice dimension too large", start);
      ++pos;
    }
    if (pos == start) throw ParseError("expected a lattice dimension", pos);
    if (v < 1) throw ParseError("lattice dimension must be positive", start);
    return static_cast<int>(v);
  };
  const int w = number();
  if (pos >= s.size() || s[pos] != 'x') throw ParseError("expected 'x'", pos);
  ++pos;
  const int h = number();
  Boundary b = Boundary::kPlane;
  if (pos < s.size()) {
    if (s[pos] != ':') throw ParseError("expected ':' or end of input", pos);
    const std::string kind = s.substr(pos + 1);
    if (kind == "torus") {
      b = Boundary::kTorus;
    } else if (kind != "plane") {
      throw ParseError("expected 'plane' or 'torus'", pos + 1);
    }
  }
  try {
    return Lattice(w, h, b);
  } catch (const GeometryError& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string format_lattice(const Lattice& lat) { return lat.name(); }

}  // namespace qd
