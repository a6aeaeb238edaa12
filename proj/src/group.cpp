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

#include "qdouble/group.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qd {

cplx Phase::value() const {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

AbelianGroup::AbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int n : orders_) {
    if (n < 2) {
      throw InvalidGroup("cyclic factor order must be >= 2, got " + std::to_string(n));
    }
  }
  strides_.assign(orders_.size(), 1);
  order_ = 1;
  for (int i = static_cast<int>(orders_.size()) - 1; i >= 0; --i) {
    strides_[i] = order_;
    if (order_ > 1024 / orders_[i]) throw InvalidGroup("group order exceeds 1024");
    order_ *= orders_[i];
  }
  exponent_ = 1;
  for (int n : orders_) exponent_ = std::lcm(exponent_, n);

  const int n = order_;
  mul_.resize(static_cast<std::size_t>(n) * n);
  inv_.resize(n);
  phase_.resize(static_cast<std::size_t>(n) * n);
  std::vector<GroupElement> els = elements();
  for (int a = 0; a < n; ++a) {
    inv_[a] = index(inv(els[a]));
    for (int b = 0; b < n; ++b) {
      mul_[a * n + b] = index(mul(els[a], els[b]));
      std::int64_t k = 0;
      for (std::size_t j = 0; j < orders_.size(); ++j) {
        k += static_cast<std::int64_t>(els[a].residues[j]) * els[b].residues[j] * (exponent_ / orders_[j]);
      }
      phase_[a * n + b] = static_cast<int>(k % exponent_);
    }
  }
  roots_.resize(exponent_);
  for (int k = 0; k < exponent_; ++k) roots_[k] = Phase{k, exponent_}.value();
  // Snap the obvious lattice points so that real characters are exactly real.
  for (int k = 0; k < exponent_; ++k) {
    if ((4 * k) % exponent_ == 0) {
      const int quarter = (4 * k) / exponent_;
      static const cplx kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      roots_[k] = kQuarter[quarter];
    }
  }
}

std::string AbelianGroup::name() const { return format_group(*this); }

GroupElement AbelianGroup::element(int index) const {
  if (index < 0 || index >= order_) throw InvalidElement("element index out of range");
  GroupElement g;
  g.residues.resize(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    g.residues[i] = (index / strides_[i]) % orders_[i];
  }
  return g;
}

Character AbelianGroup::character(int index) const { return Character{element(index).residues}; }

void AbelianGroup::check_shape(const std::vector<int>& residues) const {
  if (residues.size() != orders_.size()) {
    throw InvalidElement("shape mismatch: expected " + std::to_string(orders_.size()) + " residues, got " +
                         std::to_string(residues.size()));
  }
}

int AbelianGroup::index(const GroupElement& g) const {
  check_shape(g.residues);
  int idx = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const int r = ((g.residues[i] % orders_[i]) + orders_[i]) % orders_[i];
    idx += r * strides_[i];
  }
  return idx;
}

int AbelianGroup::index(const Character& chi) const { return index(GroupElement{chi.residues}); }

std::vector<GroupElement> AbelianGroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(order_);
  for (int i = 0; i < order_; ++i) out.push_back(element(i));
  return out;
}

std::vector<Character> AbelianGroup::characters() const {
  std::vector<Character> out;
  out.reserve(order_);
  for (int i = 0; i < order_; ++i) out.push_back(character(i));
  return out;
}

int AbelianGroup::pow(int a, int k) const {
  int out = identity();
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  for (int i = 0; i < k; ++i) out = mul(out, a);
  return out;
}

GroupElement AbelianGroup::mul(const GroupElement& g, const GroupElement& h) const {
  check_shape(g.residues);
  check_shape(h.residues);
  GroupElement out;
  out.residues.resize(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    out.residues[i] = (((g.residues[i] + h.residues[i]) % orders_[i]) + orders_[i]) % orders_[i];
  }
  return out;
}

GroupElement AbelianGroup::inv(const GroupElement& g) const {
  check_shape(g.residues);
  GroupElement out;
  out.residues.resize(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    out.residues[i] = (((-g.residues[i]) % orders_[i]) + orders_[i]) % orders_[i];
  }
  return out;
}

GroupElement AbelianGroup::identity_element() const {
  return GroupElement{std::vector<int>(orders_.size(), 0)};
}

Character AbelianGroup::char_mul(const Character& a, const Character& b) const {
  return Character{mul(GroupElement{a.residues}, GroupElement{b.residues}).residues};
}

Character AbelianGroup::char_conj(const Character& a) const {
  return Character{inv(GroupElement{a.residues}).residues};
}

Phase AbelianGroup::char_phase(const Character& chi, const GroupElement& g) const {
  check_shape(chi.residues);
  check_shape(g.residues);
  std::int64_t k = phase_num(index(chi), index(g));
  std::int64_t d = exponent_;
  const std::int64_t gcd = std::gcd(k, d);
  if (gcd > 0) {
    k /= gcd;
    d /= gcd;
  }
  return Phase{k, d};
}

cplx AbelianGroup::char_eval(const Character& chi, const GroupElement& g) const {
  return char_eval(index(chi), index(g));
}

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}

AbelianGroup parse_group(std::string_view spec) {
  std::string s;
  for (char c : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "trivial") return AbelianGroup(std::vector<int>{});
  std::vector<int> orders;
  std::size_t pos = 0;
  while (true) {
    if (pos >= s.size() || s[pos] != 'z') throw ParseError("expected 'z'", pos);
    ++pos;
    const std::size_t start = pos;
    long value = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      value = value * 10 + (s[pos] - '0');
      if (value > 4096) throw ParseError("cyclic order too large", start);
      ++pos;
    }
    if (pos == start) throw ParseError("expected cyclic order", pos);
    if (value < 2) throw ParseError("cyclic order must be >= 2", start);
    orders.push_back(static_cast<int>(value));
    if (pos == s.size()) break;
    if (s[pos] != 'x') throw ParseError("expected 'x' or end of input", pos);
    ++pos;
  }
  try {
    return AbelianGroup(orders);
  } catch (const InvalidGroup& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string format_group(const AbelianGroup& group) {
  if (group.orders().empty()) return "trivial";
  std::string out;
  for (std::size_t i = 0; i < group.orders().size(); ++i) {
    if (i) out += "x";
    out += "z" + std::to_string(group.orders()[i]);
  }
  return out;
}

}  // namespace qd
