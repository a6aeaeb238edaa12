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

#ifndef QDOUBLE_STATE_HPP_
#define QDOUBLE_STATE_HPP_

#include <cstdint>
#include <map>
#include <ostream>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "qdouble/group.hpp"

namespace qd {

inline constexpr double kPruneTol = 1e-12;
inline constexpr double kRankTol = 1e-9;

// One group-element index per edge. Lexicographic order on configurations
// coincides with mixed-radix order, edge 0 most significant.
using Config = std::vector<std::uint16_t>;

// Mixed-radix key of a configuration; throws std::overflow_error if the
// key does not fit in 64 bits.
std::uint64_t config_key(const Config& c, int order);
Config config_from_key(std::uint64_t key, int num_edges, int order);

struct ConfigHash {
  std::size_t operator()(const Config& c) const noexcept;
};

struct Term {
  Config config;
  cplx amp;
};

// Sparse vector over the configuration basis. Terms are kept sorted by
// configuration with no duplicates and no amplitude below kPruneTol.
class SparseState {
 public:
  SparseState() = default;
  static SparseState basis(Config c, cplx amp = 1.0);
  // Sorts, merges duplicates in input order and prunes.
  static SparseState from_terms(std::vector<Term> terms, double prune = kPruneTol);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  cplx amplitude(const Config& c) const;

  double norm() const;
  SparseState normalized() const;

  SparseState& operator*=(cplx s);
  friend SparseState operator*(cplx s, SparseState v) { return v *= s; }
  friend SparseState operator+(const SparseState& a, const SparseState& b);
  friend SparseState operator-(const SparseState& a, const SparseState& b);

 private:
  std::vector<Term> terms_;
};

// <a|b>, conjugate-linear in a.
cplx inner(const SparseState& a, const SparseState& b);
double distance(const SparseState& a, const SparseState& b);

// JSON lines {"key":..,"re":..,"im":..}, one per term, for debugging.
void dump_jsonl(std::ostream& out, const SparseState& s, int order);

// Incremental orthonormal basis, over C or over R (where a complex vector
// counts as its real and imaginary parts). Each candidate is projected out
// twice against the current basis and kept when the residual norm exceeds
// tol * max(1, |v|).
class SpanBuilder {
 public:
  enum class Field { kComplex, kReal };

  explicit SpanBuilder(Field field = Field::kComplex, double tol = kRankTol);

  // True if v enlarged the span.
  bool add(const SparseState& v);
  int dim() const { return static_cast<int>(basis_.size()); }
  Field field() const { return field_; }

  // Orthogonal projection onto the span (complex field only).
  SparseState project(const SparseState& v) const;
  // Norm of the component of v orthogonal to the span.
  double residual(const SparseState& v) const;
  // Basis vectors as states (complex field only).
  std::vector<SparseState> basis() const;

 private:
  Eigen::VectorXcd embed(const SparseState& v, bool grow);
  Eigen::VectorXcd embed_fixed(const SparseState& v) const;
  double real_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd remove_span(Eigen::VectorXcd x) const;

  Field field_;
  double tol_;
  std::unordered_map<Config, int, ConfigHash> index_;
  std::vector<Config> keys_;
  std::vector<Eigen::VectorXcd> basis_;
};

int real_linear_rank(const std::vector<SparseState>& vectors, double tol = kRankTol);
int complex_span_dim(const std::vector<SparseState>& vectors, double tol = kRankTol);
SparseState project_onto_span(const SparseState& psi, const std::vector<SparseState>& vectors,
                              double tol = kRankTol);
std::vector<SparseState> orthonormal_basis(const std::vector<SparseState>& vectors, double tol = kRankTol);

}  // namespace qd

#endif  // QDOUBLE_STATE_HPP_
