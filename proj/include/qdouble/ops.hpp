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

#ifndef QDOUBLE_OPS_HPP_
#define QDOUBLE_OPS_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Sparse>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"
#include "qdouble/state.hpp"

namespace qd {

inline constexpr std::size_t kMatrixCap = std::size_t{1} << 20;

// Elementary step of a basis action. Probes read the signed edge sum
// v = sum_e sign_e * x_e (group law, sign -1 meaning the inverse) and
// multiply the amplitude by [v == value] or by chi_value(v). Shifts add
// sign_e * value to every listed edge.
struct Atom {
  enum class Kind { kEquals, kPhase, kShift };
  Kind kind = Kind::kShift;
  std::vector<SignedEdge> edges;
  int value = 0;
};

// coeff * (atoms applied first to last). Maps each basis state to at most
// one basis state.
struct BasisAction {
  cplx coeff = 1.0;
  std::vector<Atom> atoms;

  // Applies in place; returns false when the state is annihilated.
  bool apply(const AbelianGroup& g, Config& x, cplx& amp) const;
  BasisAction adjoint(const AbelianGroup& g) const;
};

// Finite sum of basis actions. Holds a non-owning pointer to the group,
// which must outlive the operator.
class LinearOp {
 public:
  explicit LinearOp(const AbelianGroup& g) : group_(&g) {}
  LinearOp(const AbelianGroup& g, BasisAction a) : group_(&g), terms_{std::move(a)} {}
  static LinearOp identity(const AbelianGroup& g) { return LinearOp(g, BasisAction{}); }

  const AbelianGroup& group() const { return *group_; }
  const std::vector<BasisAction>& terms() const { return terms_; }
  std::vector<int> support() const;  // sorted edge ids touched by any atom

  SparseState apply(const SparseState& psi) const;
  SparseState apply_basis(const Config& x) const;
  LinearOp adjoint() const;

  LinearOp& operator+=(const LinearOp& o);
  LinearOp& operator*=(cplx s);
  friend LinearOp operator+(LinearOp a, const LinearOp& b) { return a += b; }
  friend LinearOp operator-(LinearOp a, const LinearOp& b);
  friend LinearOp operator*(cplx s, LinearOp a) { return a *= s; }
  // Composition: (a * b) psi = a (b psi).
  friend LinearOp operator*(const LinearOp& a, const LinearOp& b);

 private:
  const AbelianGroup* group_;
  std::vector<BasisAction> terms_;
};

// Triangle operators. T keeps basis states whose edge carries h along the
// triangle (h-bar against it); L shifts the edge by g along the dual triangle.
LinearOp triangle_T(const AbelianGroup& g, const Triangle& t, int h);
LinearOp triangle_L(const AbelianGroup& g, const Triangle& t, int shift);

// F^{g,h}: keeps basis states whose signed direct-path sum is h, then
// shifts the dual path by g. The trivial ribbon gives the identity.
LinearOp ribbon_F(const AbelianGroup& g, const Ribbon& r, int g_label, int h_label);
// F^{chi,c} = sum_g conj(chi(g)) F^{c-bar,g}.
LinearOp ribbon_F_irrep(const AbelianGroup& g, const Ribbon& r, int chi, int c);

// Vertex gauge transformation on the existing edges at v (truncated on a
// plane boundary). star_op insists on a complete star.
LinearOp gauge_op(const Lattice& lat, const AbelianGroup& g, int v, int shift);
LinearOp star_op(const Lattice& lat, const AbelianGroup& g, const Site& s, int shift);
// Projector onto anticlockwise flux h at the site's face.
LinearOp plaq_op(const Lattice& lat, const AbelianGroup& g, const Site& s, int h);
LinearOp star_proj(const Lattice& lat, const AbelianGroup& g, const Site& s);
LinearOp gauge_proj(const Lattice& lat, const AbelianGroup& g, int v);
LinearOp plaq_proj(const Lattice& lat, const AbelianGroup& g, const Site& s);
// D^{xi,d} = |G|^-1 sum_k conj(xi(k)) A^k B^d.
LinearOp charge_projector(const Lattice& lat, const AbelianGroup& g, const Site& s, int xi, int d);
// K^{sigma,c} = |G|^-1 sum_g conj(sigma(g)) F^{g,c} on a closed ribbon.
LinearOp loop_charge_projector(const AbelianGroup& g, const Ribbon& loop, int sigma, int c);

// -sum A_s over complete stars inside the region, -sum B_s over plaquettes
// inside it. Throws GeometryError if no term qualifies.
LinearOp hamiltonian(const Lattice& lat, const AbelianGroup& g, const Region& region);
int hamiltonian_term_count(const Lattice& lat, const Region& region);

// Largest |a x - b x| over all basis states x that vary the union support of
// both operators (other edges fixed to the identity). Throws
// std::length_error beyond `cap` configurations.
double max_difference(const LinearOp& a, const LinearOp& b, int num_edges, std::size_t cap = kMatrixCap);
double commutator_norm(const LinearOp& a, const LinearOp& b, int num_edges, std::size_t cap = kMatrixCap);

// Explicit matrix over the full configuration space, basis ordered by
// config_key. Refuses dimensions above `cap`.
Eigen::SparseMatrix<cplx> to_sparse_matrix(const LinearOp& op, int num_edges, std::size_t cap = kMatrixCap);

}  // namespace qd

#endif  // QDOUBLE_OPS_HPP_
