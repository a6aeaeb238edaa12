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

#ifndef QDOUBLE_GROUND_HPP_
#define QDOUBLE_GROUND_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "qdouble/group.hpp"
#include "qdouble/lattice.hpp"
#include "qdouble/ops.hpp"
#include "qdouble/state.hpp"

namespace qd {

inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 22;

class DegenerateGroundSpace : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Anticlockwise monodromy of a face.
int face_flux(const Lattice& lat, const AbelianGroup& g, int face, const Config& x);
bool is_flat(const Lattice& lat, const AbelianGroup& g, const Config& x);

// All flat connections in lexicographic order, by backtracking with each
// face checked as soon as its last edge is assigned.
std::vector<Config> flat_connections(const Lattice& lat, const AbelianGroup& g,
                                     std::size_t cap = kEnumerationCap);

// Uniform normalized superposition of the flat connections of a plane patch.
SparseState ground_state(const Lattice& lat, const AbelianGroup& g);

// Orthonormal basis of the joint +1 space of every vertex gauge projector
// and every plaquette projector: one uniform gauge-orbit state per orbit of
// flat connections.
std::vector<SparseState> ground_space(const Lattice& lat, const AbelianGroup& g);

// P_c = prod T^{c(j)} over the edges of the given faces. `assignment` maps
// edge id to label and must cover every edge of every face.
LinearOp connection_projector(const Lattice& lat, const AbelianGroup& g, const std::vector<int>& faces,
                              const std::map<int, int>& assignment);

// <psi|op psi> / <psi|psi>.
cplx expectation(const SparseState& psi, const LinearOp& op);

// <Omega|op|Omega> for Omega the uniform superposition over the gauge orbit
// of the all-identity configuration, evaluated without enumerating Omega.
// Every basis action shifts by a fixed pattern and each probe reads a
// linear function of the vertex potentials, so the average over the orbit
// reduces to a sum over the potentials the probes actually see.
cplx vacuum_expectation(const Lattice& lat, const LinearOp& op, std::size_t cap = kEnumerationCap);

// True if the edge labelling is dphi for some vertex potential phi.
bool is_pure_gauge(const Lattice& lat, const AbelianGroup& g, const std::vector<int>& labels);

// Seeded local observable supported on the allowed edges: a random complex
// combination of one or two products of two or three elementary operators
// (vertex gauge maps, plaquette flux projectors, single-edge shifts and
// characters). Throws GeometryError if nothing fits.
LinearOp random_local_op(const Lattice& lat, const AbelianGroup& g, const std::vector<int>& allowed,
                         std::mt19937_64& rng);

// Product-state check on a plane patch: pairs of seeded local observables
// on 3x3 vertex windows that share no vertex and no adjacent face, compared
// through |omega0(AB) - omega0(A) omega0(B)|. Every other pair is drawn
// with both expectations nonzero.
struct SplitResult {
  int samples = 0;
  int attempts = 0;
  int nontrivial = 0;  // pairs with |omega0(A) omega0(B)| > 1e-3
  double max_error = 0.0;
};
SplitResult split_check(const Lattice& lat, const AbelianGroup& g, int samples, std::uint64_t seed);

// True when b is a deformation of a on a plane patch: same end sites, and
// the closed chains formed by their dual paths (resp. direct paths) wind
// equally around the two end vertices (resp. the two end faces). Otherwise
// sweeping one ribbon onto the other drags a single end across it.
bool is_deformation(const Lattice& lat, const Ribbon& a, const Ribbon& b);

// Ribbons with shared end sites: one shortest route through the whole patch
// and a deformation avoiding a random subset of edges. Records the largest
// |F_rho^{h,x} Omega - F_rho'^{h,x} Omega| over all labels.
struct DeformationResult {
  int pairs = 0;
  int attempts = 0;
  double max_error = 0.0;
};
DeformationResult deformation_check(const Lattice& lat, const AbelianGroup& g, int pairs, std::uint64_t seed);

// Largest |omega0(F_rho^{h,x} A F_sigma^{l,k}) - omega0(F_rhobar^{hbar,xbar} A F_sigmabar^{lbar,kbar})|
// over seeded ribbons, labels and local A. The reversed ribbons are
// standard ribbons routed back from end to start.
struct InversionResult {
  int samples = 0;
  int attempts = 0;
  int nonzero = 0;  // samples with |omega0(...)| > 1e-6
  double max_error = 0.0;
};
InversionResult inversion_check(const Lattice& lat, const AbelianGroup& g, int samples, std::uint64_t seed);

}  // namespace qd

#endif  // QDOUBLE_GROUND_HPP_
