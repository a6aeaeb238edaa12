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

#ifndef QDOUBLE_DUALITY_HPP_
#define QDOUBLE_DUALITY_HPP_

#include <cstdint>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"
#include "qdouble/ops.hpp"
#include "qdouble/state.hpp"

namespace qd {

// Closure of the plane ground state under ribbon operators supported in a
// region. Single triangles are ribbons too, so the closure is the orbit of
// Omega under the full edge algebra of the region.
class ConeSubspace {
 public:
  ConeSubspace(const Lattice& lat, const AbelianGroup& g, const Region& region, int cap = 6);

  const Region& region() const { return region_; }
  const SparseState& omega() const { return omega_; }
  int dim() const { return span_.dim(); }
  int cap() const { return cap_; }
  // Dimension obtained with ribbons of at most cap - 1 triangles.
  int dim_previous_cap() const { return dim_prev_; }
  bool stabilized() const { return dim_prev_ == dim(); }
  std::size_t num_generators() const { return generators_.size(); }
  const std::vector<LinearOp>& generators() const { return generators_; }

  std::vector<SparseState> basis() const { return span_.basis(); }
  SparseState project(const SparseState& v) const { return span_.project(v); }
  double residual(const SparseState& v) const { return span_.residual(v); }
  // Largest residual of generator * basis vector; zero for an invariant span.
  double invariance_error() const;

 private:
  static SpanBuilder close(const SparseState& omega, const std::vector<LinearOp>& gens);

  Region region_;
  int cap_;
  SparseState omega_;
  std::vector<LinearOp> generators_;
  SpanBuilder span_;
  int dim_prev_ = 0;
};

// All F^{chi,c} on every ribbon of 1..cap triangles inside the region, plus
// the shifts of region edges on the rim of a plane patch (no dual triangle
// exists there).
std::vector<LinearOp> region_ribbon_ops(const Lattice& lat, const AbelianGroup& g, const Region& region, int cap);

struct ExternalChargeResult {
  int samples = 0;
  int attempts = 0;
  double max_projection = 0.0;
};

// Samples products of one to three ribbon operators in the complement that
// fail to commute with a vertex or face detector at some site of the
// interior complement, and records the largest |P_Lambda F Omega|.
ExternalChargeResult external_charge_orthogonality_check(const Lattice& lat, const AbelianGroup& g,
                                                         const ConeSubspace& cs, int samples, std::uint64_t seed,
                                                         int cap = 6);

struct BoundaryRibbonResult {
  int ribbons = 0;
  double max_residual = 0.0;
};

// Ribbons in the complement whose two endpoints are boundary sites with
// both star and plaquette meeting the region; every irrep ribbon operator
// on them must map Omega into the cone subspace.
BoundaryRibbonResult boundary_ribbon_check(const Lattice& lat, const AbelianGroup& g, const ConeSubspace& cs,
                                           int cap = 6);

struct DensityResult {
  int target = 0;                  // 2 dim H_Lambda
  int rank = 0;                    // region family plus i times compressed complement family
  int rank_region_only = 0;        // negative control
  int schmidt_rank = 0;            // of Omega across the cut
  bool frame_consistent = false;   // dim H_Lambda == |G|^|Lambda| * schmidt_rank
  std::size_t complement_ops = 0;  // complement operators consumed before saturation
};

// Real-linear rank of {X Omega} for X self-adjoint in the region algebra
// together with {i P Y Omega} for Y self-adjoint in the complement algebra.
// Both algebras are spanned by products of generalized Pauli operators
// (character times shift) on their edges; the complement family is swept
// by increasing weight and stops at saturation. Vectors are handled in the
// Schmidt frame of Omega across the cut, where P Y Omega only needs the
// compression of Y to the complement Schmidt vectors.
DensityResult self_adjoint_density_check(const Lattice& lat, const AbelianGroup& g, const ConeSubspace& cs);

struct TechLemmaResult {
  int samples = 0;
  double max_error = 0.0;  // max | 1 - |<psi|phi>| |
};

// n ribbons from a common site to distinct far sites, versus a single
// ribbon carrying the fused charge into the site times ribbons joining the
// far ends. Evaluated exactly on the gauge-orbit vacuum.
TechLemmaResult tech_lemma_check(const Lattice& lat, const AbelianGroup& g, int n, int samples, std::uint64_t seed);

}  // namespace qd

#endif  // QDOUBLE_DUALITY_HPP_
