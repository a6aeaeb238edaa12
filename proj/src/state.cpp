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

#include "qdouble/state.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace qd {

std::uint64_t config_key(const Config& c, int order) {
  std::uint64_t key = 0;
  const auto radix = static_cast<std::uint64_t>(order);
  for (auto label : c) {
    if (key > (std::numeric_limits<std::uint64_t>::max() - label) / radix) {
      throw std::overflow_error("configuration key exceeds 64 bits");
    }
    key = key * radix + label;
  }
  return key;
}

Config config_from_key(std::uint64_t key, int num_edges, int order) {
  Config c(num_edges);
  for (int e = num_edges - 1; e >= 0; --e) {
    c[e] = static_cast<std::uint16_t>(key % order);
    key /= order;
  }
  return c;
}

SparseState SparseState::basis(Config c, cplx amp) { return from_terms({Term{std::move(c), amp}}); }

SparseState SparseState::from_terms(std::vector<Term> terms, double prune) {
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.config < b.config; });
  SparseState out;
  out.terms_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    cplx sum = 0.0;
    while (j < terms.size() && terms[j].config == terms[i].config) sum += terms[j++].amp;
    if (std::abs(sum) >= prune) out.terms_.push_back(Term{std::move(terms[i].config), sum});
    i = j;
  }
  return out;
}

cplx SparseState::amplitude(const Config& c) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), c,
                             [](const Term& t, const Config& k) { return t.config < k; });
  if (it != terms_.end() && it->config == c) return it->amp;
  return 0.0;
}

double SparseState::norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.amp);
  return std::sqrt(s);
}

SparseState SparseState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  SparseState out = *this;
  out *= 1.0 / n;
  return out;
}

SparseState& SparseState::operator*=(cplx s) {
  for (auto& t : terms_) t.amp *= s;
  std::erase_if(terms_, [](const Term& t) { return std::abs(t.amp) < kPruneTol; });
  return *this;
}

namespace {

SparseState combine(const SparseState& a, const SparseState& b, double sign) {
  std::vector<Term> terms;
  terms.reserve(a.size() + b.size());
  for (const auto& t : a.terms()) terms.push_back(t);
  for (const auto& t : b.terms()) terms.push_back(Term{t.config, sign * t.amp});
  return SparseState::from_terms(std::move(terms));
}

}  // namespace

SparseState operator+(const SparseState& a, const SparseState& b) { return combine(a, b, 1.0); }
SparseState operator-(const SparseState& a, const SparseState& b) { return combine(a, b, -1.0); }

cplx inner(const SparseState& a, const SparseState& b) {
  cplx s = 0.0;
  auto i = a.terms().begin();
  auto j = b.terms().begin();
  while (i != a.terms().end() && j != b.terms().end()) {
    if (i->config < j->config) {
      ++i;
    } else if (j->config < i->config) {
      ++j;
    } else {
      s += std::conj(i->amp) * j->amp;
      ++i;
      ++j;
    }
  }
  return s;
}

double distance(const SparseState& a, const SparseState& b) { return (a - b).norm(); }

void dump_jsonl(std::ostream& out, const SparseState& s, int order) {
  const auto flags = out.flags();
  out << std::setprecision(17);
  for (const auto& t : s.terms()) {
    out << "{\"key\":" << config_key(t.config, order) << ",\"re\":" << t.amp.real() << ",\"im\":" << t.amp.imag()
        << "}\n";
  }
  out.flags(flags);
}

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (std::uint16_t x : c) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

SpanBuilder::SpanBuilder(Field field, double tol) : field_(field), tol_(tol) {}

Eigen::VectorXcd SpanBuilder::embed(const SparseState& v, bool grow) {
  if (grow) {
    for (const auto& t : v.terms()) {
      if (index_.emplace(t.config, static_cast<int>(keys_.size())).second) keys_.push_back(t.config);
    }
    const auto n = static_cast<Eigen::Index>(keys_.size());
    for (auto& b : basis_) {
      if (b.size() < n) {
        const auto old = b.size();
        b.conservativeResize(n);
        b.tail(n - old).setZero();
      }
    }
  }
  return embed_fixed(v);
}

Eigen::VectorXcd SpanBuilder::embed_fixed(const SparseState& v) const {
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(keys_.size()));
  for (const auto& t : v.terms()) {
    auto it = index_.find(t.config);
    if (it != index_.end()) x[it->second] = t.amp;
  }
  return x;
}

double SpanBuilder::real_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
  return a.dot(b).real();
}

Eigen::VectorXcd SpanBuilder::remove_span(Eigen::VectorXcd x) const {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) {
      if (field_ == Field::kComplex) {
        x -= b.dot(x) * b;  // dot conjugates b
      } else {
        x -= real_inner(b, x) * b;
      }
    }
  }
  return x;
}

bool SpanBuilder::add(const SparseState& v) {
  const double vn = v.norm();
  if (vn == 0.0) return false;
  Eigen::VectorXcd x = remove_span(embed(v, true));
  const double r = x.norm();
  if (r <= tol_ * std::max(1.0, vn)) return false;
  basis_.push_back(x / r);
  return true;
}

SparseState SpanBuilder::project(const SparseState& v) const {
  if (field_ != Field::kComplex) throw std::logic_error("projection is only defined over C");
  const Eigen::VectorXcd x = embed_fixed(v);
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(x.size());
  for (const auto& b : basis_) p += b.dot(x) * b;
  std::vector<Term> terms;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (std::abs(p[i]) >= kPruneTol) terms.push_back(Term{keys_[i], p[i]});
  }
  return SparseState::from_terms(std::move(terms));
}

double SpanBuilder::residual(const SparseState& v) const {
  // Components outside the known index set are orthogonal to every basis vector.
  double outside = 0.0;
  for (const auto& t : v.terms()) {
    if (!index_.count(t.config)) outside += std::norm(t.amp);
  }
  const Eigen::VectorXcd x = remove_span(embed_fixed(v));
  return std::sqrt(x.squaredNorm() + outside);
}

std::vector<SparseState> SpanBuilder::basis() const {
  if (field_ != Field::kComplex) throw std::logic_error("basis states are only defined over C");
  std::vector<SparseState> out;
  for (const auto& b : basis_) {
    std::vector<Term> terms;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      if (std::abs(b[i]) >= kPruneTol) terms.push_back(Term{keys_[i], b[i]});
    }
    out.push_back(SparseState::from_terms(std::move(terms)));
  }
  return out;
}

int real_linear_rank(const std::vector<SparseState>& vectors, double tol) {
  SpanBuilder span(SpanBuilder::Field::kReal, tol);
  for (const auto& v : vectors) span.add(v);
  return span.dim();
}

int complex_span_dim(const std::vector<SparseState>& vectors, double tol) {
  SpanBuilder span(SpanBuilder::Field::kComplex, tol);
  for (const auto& v : vectors) span.add(v);
  return span.dim();
}

SparseState project_onto_span(const SparseState& psi, const std::vector<SparseState>& vectors, double tol) {
  SpanBuilder span(SpanBuilder::Field::kComplex, tol);
  for (const auto& v : vectors) span.add(v);
  return span.project(psi);
}

std::vector<SparseState> orthonormal_basis(const std::vector<SparseState>& vectors, double tol) {
  SpanBuilder span(SpanBuilder::Field::kComplex, tol);
  for (const auto& v : vectors) span.add(v);
  return span.basis();
}

}  // namespace qd
