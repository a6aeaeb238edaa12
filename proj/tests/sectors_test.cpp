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

#include "qdouble/sectors.hpp"

#include <gtest/gtest.h>

#include "qdouble/ground.hpp"
#include "support/oracles.hpp"

namespace qd {
namespace {

struct GroupCase {
  std::vector<int> orders;
};

void PrintTo(const GroupCase& k, std::ostream* os) { *os << format_group(AbelianGroup(k.orders)); }

class SectorsTest : public ::testing::TestWithParam<GroupCase> {
 protected:
  AbelianGroup g{GetParam().orders};
  oracle::Cyclic c{GetParam().orders};
  Lattice lat{5, 5, Boundary::kPlane};
};

INSTANTIATE_TEST_SUITE_P(Groups, SectorsTest,
                         ::testing::Values(GroupCase{{2}}, GroupCase{{3}}, GroupCase{{4}}, GroupCase{{2, 2}}),
                         [](const auto& info) {
                           std::string name = "z";
                           for (std::size_t i = 0; i < info.param.orders.size(); ++i) {
                             name += (i ? "xz" : "") + std::to_string(info.param.orders[i]);
                           }
                           return name;
                         });

TEST_P(SectorsTest, FusionFollowsTheGroupLaw) {
  const FusionTable t = fusion_table(lat, g);
  ASSERT_EQ(t.labels.size(), static_cast<std::size_t>(c.order() * c.order()));
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    for (std::size_t j = 0; j < t.labels.size(); ++j) {
      const SectorLabel& a = t.labels[i];
      const SectorLabel& b = t.labels[j];
      EXPECT_EQ(t.measured[i][j].chi, c.add(a.chi, b.chi));
      EXPECT_EQ(t.measured[i][j].c, c.add(a.c, b.c));
    }
  }
  EXPECT_LE(t.max_error, 1e-9);
  EXPECT_TRUE(t.group_law);
}

TEST_P(SectorsTest, BraidingPhases) {
  for (const SectorLabel& a : sector_labels(g)) {
    for (const SectorLabel& b : sector_labels(g)) {
      const cplx want = c.chi(a.chi, b.c) * c.chi(b.chi, a.c);
      const BraidResult r = braiding_phase(lat, g, a, b);
      EXPECT_LT(std::abs(r.lambda - want), 1e-9);
      const BraidResult s = braiding_phase(lat, g, a, b, true);
      EXPECT_LT(std::abs(s.lambda - std::conj(want)), 1e-9);
    }
  }
}

TEST_P(SectorsTest, SMatrix) {
  const SMatrixResult s = s_matrix(lat, g);
  const SMatrixResult m = s_matrix(lat, g, true);
  const SMatrixResult d = s_matrix(lat, g, false, true);
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    for (std::size_t j = 0; j < s.labels.size(); ++j) {
      const SectorLabel& a = s.labels[i];
      const SectorLabel& b = s.labels[j];
      const cplx want = std::conj(c.chi(a.chi, b.c) * c.chi(b.chi, a.c));
      EXPECT_LT(std::abs(s.simulated[i][j] - want), 1e-9);
      EXPECT_LT(std::abs(d.simulated[i][j] - want), 1e-9);
      EXPECT_LT(std::abs(m.simulated[i][j] - std::conj(want)), 1e-9);
      EXPECT_LT(std::abs(s.normalized[i][j] * static_cast<double>(c.order()) - want), 1e-12);
    }
  }
  EXPECT_LE(s.exchange_back_error, 1e-9);
}

TEST_P(SectorsTest, DistinctSectorsAreSeparatedByALoop) {
  for (const SectorLabel& a : sector_labels(g)) {
    for (const SectorLabel& b : sector_labels(g)) {
      const Distinction d = sector_distinguish(lat, g, a, b);
      if (a == b) {
        EXPECT_FALSE(d.found);
        EXPECT_LT(d.gap, 1e-9);
      } else {
        EXPECT_TRUE(d.found);
        EXPECT_NEAR(d.gap, 1.0, 1e-9);
      }
    }
  }
}

TEST(SectorsTest, ToricCodePattern) {
  const AbelianGroup g({2});
  const SMatrixResult s = s_matrix(Lattice(5, 5, Boundary::kPlane), g);
  // Labels ordered (chi, c): 1, m, e, em. Only the pairs of distinct
  // nontrivial anyons among e and m braid nontrivially.
  const double table[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_LT(std::abs(s.simulated[i][j] - table[i][j]), 1e-9);
  }
}

TEST(SectorsTest, Z3PhaseAtGenerators) {
  const AbelianGroup g({3});
  const BraidResult r = braiding_phase(Lattice(5, 5, Boundary::kPlane), g, {1, 0}, {0, 1});
  EXPECT_LT(std::abs(r.lambda - std::polar(1.0, 2.0 * M_PI / 3.0)), 1e-9);
  const SMatrixResult s = s_matrix(Lattice(5, 5, Boundary::kPlane), g);
  EXPECT_LT(std::abs(s.simulated[3][1] - std::polar(1.0, -2.0 * M_PI / 3.0)), 1e-9);
}

TEST(SectorsTest, ConjugationAndLabels) {
  const AbelianGroup g({4});
  EXPECT_EQ(conjugate(g, {1, 3}), (SectorLabel{3, 1}));
  EXPECT_EQ(fuse(g, {1, 3}, {3, 1}), (SectorLabel{0, 0}));
  EXPECT_EQ(sector_labels(g).size(), 16u);
  EXPECT_EQ(format_label(AbelianGroup({2, 2}), {1, 2}), "(0,1;1,0)");
}

TEST(SectorsTest, ChargedStatesCarryTheirLabel) {
  const Lattice lat(4, 4, Boundary::kPlane);
  const AbelianGroup g({3});
  const Site s0{lat.vertex(1, 1), lat.face(1, 1)};
  const Site s1{lat.vertex(2, 2), lat.face(2, 2)};
  const Ribbon r = ribbon_between(lat, s0, s1, Region::all(lat));
  for (const SectorLabel& a : sector_labels(g)) {
    for (const SectorLabel& d : sector_labels(g)) {
      EXPECT_NEAR(std::abs(detected_charge(lat, g, a, r, s0, d)), a == d ? 1.0 : 0.0, 1e-9);
    }
  }
  EXPECT_THROW(sector_distinguish(lat, g, {1, 0}, {0, 1}), GeometryError);
}

TEST(SectorsTest, ChargedStateMatchesTheVacuumEvaluator) {
  const Lattice lat(3, 3, Boundary::kPlane);
  const AbelianGroup g({2});
  const Site s0{lat.vertex(1, 1), lat.face(1, 1)};
  const Ribbon r = ribbon_between(lat, s0, Site{lat.vertex(0, 0), lat.face(0, 0)}, Region::all(lat));
  for (const SectorLabel& a : sector_labels(g)) {
    const SparseState psi = charged_state(lat, g, a, r);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    for (const SectorLabel& d : sector_labels(g)) {
      const cplx direct = inner(psi, charge_projector(lat, g, s0, d.chi, d.c).apply(psi));
      EXPECT_LT(std::abs(direct - detected_charge(lat, g, a, r, s0, d)), 1e-12);
      EXPECT_NEAR(direct.real(), a == d ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_THROW(charged_state(lat, g, {1, 1}, alpha_ribbon(lat, s0)), GeometryError);
}

TEST(SectorsTest, Transporter) {
  const Lattice lat(7, 7, Boundary::kPlane);
  const AbelianGroup g({3});
  const Site s{lat.vertex(3, 3), lat.quadrant_face(lat.vertex(3, 3), 3)};
  const Ribbon r1 = ribbon_walk(lat, s, "EEE");
  const Ribbon r2 = ribbon_walk(lat, s, "SSS");
  const Transporter t = transporter(lat, g, {1, 2}, r1, r2, 2);
  EXPECT_FALSE(ribbons_overlap(t.connector, t.head1));
  EXPECT_EQ(*t.connector.start(), *t.head1.end());
  EXPECT_EQ(*t.connector.end(), *t.head2.end());
  const TransporterCheck chk = check_transporter(lat, g, {1, 2}, t, 10, 4);
  EXPECT_LT(chk.vacuum_error, 1e-9);
  EXPECT_LT(chk.state_error, 1e-9);
  EXPECT_LT(chk.intertwining_error, 1e-9);
  EXPECT_EQ(chk.observables, 10);
  EXPECT_THROW(transporter(lat, g, {1, 2}, r1, r2, 0), GeometryError);
  EXPECT_THROW(transporter(lat, g, {1, 2}, r1, ribbon_walk(lat, *r1.end(), "N"), 1), GeometryError);
}

TEST(SectorsTest, SelectionCriterion) {
  const Lattice lat(5, 5, Boundary::kPlane);
  const AbelianGroup g({2});
  const Site s0{lat.vertex(1, 1), lat.face(1, 1)};
  const Site s1{lat.vertex(3, 3), lat.face(3, 3)};
  const Ribbon r = ribbon_between(lat, s0, s1, Region::all(lat));
  EXPECT_LT(selection_criterion_error(lat, g, {1, 1}, r, 30, 2), 1e-9);
}

}  // namespace
}  // namespace qd
