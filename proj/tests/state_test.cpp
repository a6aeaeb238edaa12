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

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

namespace qd {
namespace {

Config cfg(std::initializer_list<int> v) {
  Config c;
  for (int x : v) c.push_back(static_cast<std::uint16_t>(x));
  return c;
}

TEST(StateTest, KeysRoundTripInMixedRadix) {
  const Config c = cfg({2, 0, 1});
  EXPECT_EQ(config_key(c, 3), 2u * 9 + 0 * 3 + 1);
  EXPECT_EQ(config_from_key(config_key(c, 3), 3, 3), c);
  EXPECT_THROW(config_key(Config(70, 1), 2), std::overflow_error);
}

TEST(StateTest, TermsAreSortedMergedAndPruned) {
  const SparseState s = SparseState::from_terms(
      {{cfg({1, 0}), 1.0}, {cfg({0, 1}), 2.0}, {cfg({1, 0}), 0.5}, {cfg({1, 1}), 1e-14}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.terms()[0].config, cfg({0, 1}));
  EXPECT_EQ(s.amplitude(cfg({1, 0})), cplx(1.5));
  EXPECT_EQ(s.amplitude(cfg({1, 1})), cplx(0.0));
  EXPECT_NEAR(s.norm(), std::sqrt(4.0 + 2.25), 1e-15);
  EXPECT_NEAR(s.normalized().norm(), 1.0, 1e-15);
}

TEST(StateTest, InnerProductIsConjugateLinearInTheFirstSlot) {
  const SparseState a = SparseState::basis(cfg({0}), cplx(0, 1));
  const SparseState b = SparseState::basis(cfg({0}), 2.0);
  EXPECT_EQ(inner(a, b), cplx(0, -2));
  EXPECT_NEAR(distance(a, b), std::sqrt(5.0), 1e-15);
  const SparseState d = a - a;
  EXPECT_TRUE(d.empty());
  EXPECT_EQ((a + b).amplitude(cfg({0})), cplx(2, 1));
}

// Random sparse vectors over a small key space, some linearly dependent.
std::vector<SparseState> random_family(std::mt19937_64& rng, int count, int keys, bool real_coeffs) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> k(0, keys - 1);
  std::vector<SparseState> out;
  for (int i = 0; i < count; ++i) {
    if (i >= 3 && i % 3 == 0) {
      // A combination of two earlier vectors.
      const cplx a(n(rng), real_coeffs ? 0.0 : n(rng));
      out.push_back(a * out[i - 1] + out[i - 2]);
      continue;
    }
    std::vector<Term> terms;
    for (int t = 0; t < 3; ++t) terms.push_back({cfg({k(rng), k(rng)}), cplx(n(rng), n(rng))});
    out.push_back(SparseState::from_terms(terms));
  }
  return out;
}

std::vector<std::map<std::uint64_t, cplx>> as_maps(const std::vector<SparseState>& v) {
  std::vector<std::map<std::uint64_t, cplx>> out;
  for (const auto& s : v) {
    std::map<std::uint64_t, cplx> m;
    for (const auto& t : s.terms()) m[config_key(t.config, 8)] = t.amp;
    out.push_back(m);
  }
  return out;
}

TEST(StateTest, SpanDimensionsMatchDenseRank) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fam = random_family(rng, 12, 4, trial % 2 == 0);
    EXPECT_EQ(complex_span_dim(fam), oracle::rank(as_maps(fam), false));
    EXPECT_EQ(real_linear_rank(fam), oracle::rank(as_maps(fam), true));
  }
}

TEST(StateTest, RealRankCountsImaginaryMultiplesSeparately) {
  const SparseState a = SparseState::basis(cfg({1}), 1.0);
  const SparseState ia = SparseState::basis(cfg({1}), cplx(0, 1));
  EXPECT_EQ(complex_span_dim({a, ia}), 1);
  EXPECT_EQ(real_linear_rank({a, ia}), 2);
}

TEST(StateTest, ProjectionOntoASpan) {
  const SparseState a = SparseState::basis(cfg({0, 0}));
  const SparseState b = SparseState::basis(cfg({0, 1}));
  const SparseState c = SparseState::basis(cfg({1, 1}));
  const SparseState psi = 2.0 * a + cplx(0, 3) * b + c;
  const SparseState p = project_onto_span(psi, {a + b, a - b});
  EXPECT_LT(distance(p, 2.0 * a + cplx(0, 3) * b), 1e-14);
  SpanBuilder sb;
  EXPECT_TRUE(sb.add(a + b));
  EXPECT_FALSE(sb.add(cplx(0, 2) * (a + b)));
  EXPECT_NEAR(sb.residual(a), std::sqrt(0.5), 1e-14);
  const auto basis = orthonormal_basis({a + b, a - b, a});
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_NEAR(std::abs(inner(basis[0], basis[1])), 0.0, 1e-14);
}

}  // namespace
}  // namespace qd
