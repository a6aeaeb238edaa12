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

#ifndef QDOUBLE_SECTORS_HPP_
#define QDOUBLE_SECTORS_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"
#include "qdouble/ops.hpp"
#include "qdouble/state.hpp"

namespace qd {

// Charge (chi, c): a character index and a group element index.
struct SectorLabel {
  int chi = 0;
  int c = 0;
  auto operator<=>(const SectorLabel&) const = default;
};

SectorLabel conjugate(const AbelianGroup& g, const SectorLabel& a);
SectorLabel fuse(const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b);
// All |G|^2 labels, character-major.
std::vector<SectorLabel> sector_labels(const AbelianGroup& g);
// "(chi;c)" with residues, e.g. "(1;0)" or "(1,0;0,1)" for products.
std::string format_label(const AbelianGroup& g, const SectorLabel& a);

// F^{chi,c} on the ribbon; the start site carries (chi, c).
LinearOp sector_op(const AbelianGroup& g, const SectorLabel& a, const Ribbon& r);

// Normalized F^{chi,c} base. Throws GeometryError on a closed ribbon.
SparseState charged_state(const AbelianGroup& g, const SparseState& base, const SectorLabel& a, const Ribbon& r);
// Same on the plane ground state.
SparseState charged_state(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& r);

// <Omega| F* D^{detect}_s F |Omega> for F = F^{a} on the ribbon, computed
// with the vacuum evaluator.
cplx detected_charge(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& r,
                     const Site& s, const SectorLabel& detect);

// Charge at the centre of a plane patch, its partner outside a loop of
// radius one. Looks for a loop projector K^{sigma,c} whose expectations in
// the two charged states differ by one.
struct Distinction {
  bool found = false;
  SectorLabel loop;
  double gap = 0.0;  // largest gap over all loop labels
  cplx value_a = 0.0;
  cplx value_b = 0.0;
};
Distinction sector_distinguish(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a,
                               const SectorLabel& b);

// V_n = F^{a}_{rho2^n} F^{conj a}_{rho1^n rhohat_n}. rho1 and rho2 share
// their start site; rhohat_n joins the end of rho1^n to the end of rho2^n
// avoiding rho1^n.
struct Transporter {
  LinearOp op;
  Ribbon head1;      // rho1^n
  Ribbon head2;      // rho2^n
  Ribbon connector;  // rhohat_n
};
Transporter transporter(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& rho1,
                        const Ribbon& rho2, int n);

struct TransporterCheck {
  double vacuum_error = 0.0;        // |<Omega|V|Omega> - 1|
  double state_error = 0.0;         // 1 - |<F2 Fhat* Omega | V F1 Omega>|
  double intertwining_error = 0.0;  // max |V a1(A) x - a2(A) V x|
  int observables = 0;
};
// A ranges over seeded products of star, plaquette and edge operators near
// the common start site, away from the connector and the far ends; x over
// seeded basis states.
TransporterCheck check_transporter(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a,
                                   const Transporter& t, int samples, std::uint64_t seed);

struct FusionTable {
  std::vector<SectorLabel> labels;
  std::vector<std::vector<SectorLabel>> measured;  // [i][j]: charge seen for labels[i] x labels[j]
  double max_error = 0.0;                           // vs. the group law, over all detectors
  bool group_law = false;
};
// Both ribbon operators on one ribbon from the patch centre; the composite
// charge is read with D projectors at the start site.
FusionTable fusion_table(const Lattice& lat, const AbelianGroup& g);

// One crossing: rho runs east and sigma north through the patch centre.
// lambda is defined by F_rho^a F_sigma^b = lambda F_sigma^b F_rho^a.
// `swapped` puts a on sigma and b on rho (expected value conjugates).
struct BraidResult {
  cplx lambda = 0.0;
  cplx expected = 0.0;
  double error = 0.0;
};
BraidResult braiding_phase(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b,
                           bool swapped = false);
cplx braid_formula(const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b);

// S[a][b] = conj(chi_a)(c_b) conj(chi_b)(c_a).
cplx s_formula(const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b);

// Double exchange simulated from finite transporters on a plane patch of at
// least 5x5: S = eps(a,b) eps(b,a) with eps(a,b) = V* alpha(V). alpha is
// Ad F^a on a short ribbon eastwards from the patch centre, beta sits on a
// short ribbon below it, and V moves beta's end across alpha's ribbon and
// back around behind alpha's start. eps(b,a) = W* beta(W) with W moving
// alpha the other way, off beta's edges. `mirrored` reflects the picture
// left to right; `deformed` pushes the detour one column further out (the
// mirrored deformed detour needs a width of at least 7).
struct SMatrixResult {
  std::vector<SectorLabel> labels;
  std::vector<std::vector<cplx>> simulated;
  std::vector<std::vector<cplx>> formula;
  std::vector<std::vector<cplx>> normalized;  // formula / |G|
  double max_error = 0.0;                      // simulated vs formula
  double exchange_back_error = 0.0;            // max |eps(b,a) - 1|
};
SMatrixResult s_matrix(const Lattice& lat, const AbelianGroup& g, bool mirrored = false, bool deformed = false);

// max |omega0(F A F*) - omega0(A)| over seeded local A supported away from
// the ribbon and its end sites.
double selection_criterion_error(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& r,
                                 int samples, std::uint64_t seed);

}  // namespace qd

#endif  // QDOUBLE_SECTORS_HPP_
