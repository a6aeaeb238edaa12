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

#ifndef QDOUBLE_GROUP_HPP_
#define QDOUBLE_GROUP_HPP_

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qd {

using cplx = std::complex<double>;

class InvalidGroup : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element of Z_{n_1} x ... x Z_{n_k}, one residue per cyclic factor.
struct GroupElement {
  std::vector<int> residues;
  bool operator==(const GroupElement&) const = default;
};

// Character chi_r(g) = exp(2 pi i sum_j r_j g_j / n_j).
struct Character {
  std::vector<int> residues;
  bool operator==(const Character&) const = default;
};

// Exact unit phase exp(2 pi i num / den), kept reduced with 0 <= num < den.
struct Phase {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool operator==(const Phase&) const = default;
  cplx value() const;
};

// Finite abelian group given by its cyclic factors. Elements and characters
// are also addressed by dense indices in [0, order()); index 0 is the
// identity (resp. trivial character). All tables are built once.
class AbelianGroup {
 public:
  AbelianGroup() : AbelianGroup(std::vector<int>{}) {}
  explicit AbelianGroup(std::vector<int> orders);

  const std::vector<int>& orders() const { return orders_; }
  int order() const { return order_; }
  // lcm of the factor orders; every character value is a power of
  // exp(2 pi i / exponent()).
  int exponent() const { return exponent_; }
  std::string name() const;

  // Index <-> residue conversions (mixed radix, first factor most significant).
  GroupElement element(int index) const;
  Character character(int index) const;
  int index(const GroupElement& g) const;
  int index(const Character& chi) const;
  std::vector<GroupElement> elements() const;
  std::vector<Character> characters() const;

  // Index arithmetic, used on hot paths.
  int identity() const { return 0; }
  int mul(int a, int b) const { return mul_[a * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int pow(int a, int k) const;
  int char_mul(int a, int b) const { return mul(a, b); }
  int char_conj(int a) const { return inv(a); }
  // Numerator k of chi(g) = exp(2 pi i k / exponent()).
  int phase_num(int chi, int g) const { return phase_[chi * order_ + g]; }
  cplx char_eval(int chi, int g) const { return roots_[phase_num(chi, g)]; }
  cplx root(int k) const { return roots_[((k % exponent_) + exponent_) % exponent_]; }

  // Residue-level API.
  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& g) const;
  GroupElement identity_element() const;
  Character char_mul(const Character& a, const Character& b) const;
  Character char_conj(const Character& a) const;
  Phase char_phase(const Character& chi, const GroupElement& g) const;
  cplx char_eval(const Character& chi, const GroupElement& g) const;

  bool operator==(const AbelianGroup& o) const { return orders_ == o.orders_; }

 private:
  void check_shape(const std::vector<int>& residues) const;

  std::vector<int> orders_;
  std::vector<int> strides_;
  int order_ = 1;
  int exponent_ = 1;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<int> phase_;
  std::vector<cplx> roots_;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar "z<n>(xz<m>)*", case-insensitive. "trivial" or "" gives the
// trivial group.
AbelianGroup parse_group(std::string_view spec);
std::string format_group(const AbelianGroup& group);

}  // namespace qd

#endif  // QDOUBLE_GROUP_HPP_
