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

// Acceptance run: one line per criterion, exit status 1 if any fails.
// Reference values come from the brute-force oracles in tests/support.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qdouble/duality.hpp"
#include "qdouble/experiments.hpp"
#include "qdouble/ground.hpp"
#include "qdouble/sectors.hpp"
#include "support/oracles.hpp"

namespace qd {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

const std::vector<std::vector<int>> kSmallGroups = {{2}, {3}, {4}, {2, 2}};

// 1. Operator identities on the 3x3 torus.
void operator_identities(Outcome& o) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n : {2, 3}) {
    const Lattice lat(3, 3, Boundary::kTorus);
    const AbelianGroup g({n});
    for (const Check& c : identity_suite(lat, g, 1e-10, 1, worker_count())) {
      o.require(c.pass, "z" + std::to_string(n) + " " + c.name);
      worst = std::max(worst, c.max_error);
    }
  }
  const double t = seconds_since(t0);
  o.require(t <= 60.0, "time budget");
  o.note << "max error " << worst << ", " << t << " s";
}

// 2. Ground state on plane patches and exact diagonalization on the torus.
void ground_state_checks(Outcome& o) {
  double worst = 0.0;
  struct Patch {
    int w, h, n;
  };
  for (const Patch& p : {Patch{2, 2, 2}, Patch{2, 3, 2}, Patch{3, 3, 2}, Patch{2, 2, 3}, Patch{2, 3, 3},
                         Patch{3, 3, 3}}) {
    const Lattice lat(p.w, p.h, Boundary::kPlane);
    const AbelianGroup g({p.n});
    const oracle::Cyclic c{{p.n}};
    const SparseState omega = ground_state(lat, g);
    for (int v = 0; v < lat.num_vertices(); ++v) {
      worst = std::max(worst, std::abs(expectation(omega, gauge_proj(lat, g, v)) - 1.0));
    }
    for (int f = 0; f < lat.num_faces(); ++f) {
      worst = std::max(worst, std::abs(expectation(omega, plaq_proj(lat, g, Site{lat.corners(f)[0], f})) - 1.0));
    }
    // P_c over face sets small enough to enumerate every labelling.
    std::vector<std::vector<std::array<int, 2>>> face_sets;
    for (const auto& fc : oracle::face_coords(lat)) face_sets.push_back({fc});
    if (p.n == 2 || lat.num_faces() <= 2) face_sets.push_back(oracle::face_coords(lat));
    for (const auto& fs : face_sets) {
      std::vector<int> faces;
      std::set<int> edge_set;
      for (const auto& [fx, fy] : fs) {
        faces.push_back(lat.face(fx, fy));
        for (int e : {oracle::find_edge(lat, fx, fy, fx + 1, fy), oracle::find_edge(lat, fx + 1, fy, fx + 1, fy + 1),
                      oracle::find_edge(lat, fx, fy + 1, fx + 1, fy + 1), oracle::find_edge(lat, fx, fy, fx, fy + 1)}) {
          edge_set.insert(e);
        }
      }
      const std::vector<int> edges(edge_set.begin(), edge_set.end());
      const int ne = static_cast<int>(edges.size());
      std::vector<std::pair<std::map<int, int>, bool>> labellings;
      int flat_count = 0;
      for (std::uint64_t k = 0; k < oracle::config_count(ne, p.n); ++k) {
        const auto labels = oracle::decode(k, ne, p.n);
        std::map<int, int> assign;
        std::vector<int> x(lat.num_edges(), 0);
        for (int i = 0; i < ne; ++i) assign[edges[i]] = x[edges[i]] = labels[i];
        bool is_flat = true;
        for (const auto& [fx, fy] : fs) is_flat = is_flat && oracle::flux(lat, c, fx, fy, x) == 0;
        flat_count += is_flat;
        labellings.emplace_back(std::move(assign), is_flat);
      }
      for (const auto& [assign, is_flat] : labellings) {
        const double want = is_flat ? 1.0 / flat_count : 0.0;
        worst = std::max(worst, std::abs(expectation(omega, connection_projector(lat, g, faces, assign)) - want));
      }
    }
  }
  o.require(worst <= 1e-12, "plane expectations");
  o.note << "plane max error " << worst;
  for (int n : {2, 3}) {
    const Lattice lat(2, 2, Boundary::kTorus);
    const oracle::Spectrum s = oracle::diagonalize(oracle::hamiltonian(lat, {{n}}));
    const int dim = static_cast<int>(ground_space(lat, AbelianGroup({n})).size());
    o.note << "; z" << n << " torus E0 " << s.ground_energy << " degeneracy " << s.degeneracy << " (library " << dim
           << ")";
    o.require(std::abs(s.ground_energy + 8.0) <= 1e-9, "ground energy");
    o.require(s.degeneracy == n * n && dim == n * n, "degeneracy");
  }
}

// 3. Ribbon deformation and inversion on the vacuum.
void deformation(Outcome& o) {
  struct Case {
    int w, n;
  };
  for (const Case& k : {Case{4, 2}, Case{3, 3}}) {
    const Lattice lat(k.w, k.w, Boundary::kPlane);
    const AbelianGroup g({k.n});
    const DeformationResult d = deformation_check(lat, g, 200, 1);
    const InversionResult inv = inversion_check(lat, g, 200, 1);
    o.require(d.pairs == 200 && d.max_error <= 1e-10, "deformation " + g.name());
    o.require(inv.samples == 200 && inv.max_error <= 1e-10 && inv.nonzero > 0, "inversion " + g.name());
    o.note << g.name() << " on " << lat.name() << ": deformation " << d.max_error << ", inversion " << inv.max_error
           << " (" << inv.nonzero << " nonzero); ";
  }
}

// 4. Braiding phases and S matrix on 5x5.
void braiding(Outcome& o) {
  const auto t0 = Clock::now();
  const Lattice lat(5, 5, Boundary::kPlane);
  double worst = 0.0;
  for (const auto& orders : kSmallGroups) {
    const AbelianGroup g(orders);
    const oracle::Cyclic c{orders};
    const SMatrixResult s = s_matrix(lat, g);
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      for (std::size_t j = 0; j < s.labels.size(); ++j) {
        const SectorLabel& a = s.labels[i];
        const SectorLabel& b = s.labels[j];
        const cplx mutual = c.chi(a.chi, b.c) * c.chi(b.chi, a.c);
        worst = std::max(worst, std::abs(braiding_phase(lat, g, a, b).lambda - mutual));
        worst = std::max(worst, std::abs(s.simulated[i][j] - std::conj(mutual)));
      }
    }
    if (orders == std::vector<int>{2}) {
      const double table[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
      double toric = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) toric = std::max(toric, std::abs(s.simulated[i][j] - table[i][j]));
      }
      o.require(toric <= 1e-9, "toric code pattern");
    }
  }
  const double t = seconds_since(t0);
  o.require(worst <= 1e-9, "braid and S");
  o.require(t <= 300.0, "time budget");
  o.note << "max error " << worst << ", " << t << " s";
}

// 5. Fusion follows the group law.
void fusion(Outcome& o) {
  const Lattice lat(5, 5, Boundary::kPlane);
  int pairs = 0;
  for (const auto& orders : kSmallGroups) {
    const AbelianGroup g(orders);
    const oracle::Cyclic c{orders};
    const FusionTable t = fusion_table(lat, g);
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      for (std::size_t j = 0; j < t.labels.size(); ++j, ++pairs) {
        const SectorLabel want{c.add(t.labels[i].chi, t.labels[j].chi), c.add(t.labels[i].c, t.labels[j].c)};
        o.require(t.measured[i][j] == want, "fusion " + g.name());
      }
    }
    o.require(t.max_error <= 1e-9, "detector values " + g.name());
  }
  o.note << pairs << " pairs";
}

// 6. Distinct sectors are told apart with gap one.
void distinguish(Outcome& o) {
  const Lattice lat(5, 5, Boundary::kPlane);
  double worst = 0.0;
  int pairs = 0;
  for (const auto& orders : kSmallGroups) {
    const AbelianGroup g(orders);
    for (const SectorLabel& a : sector_labels(g)) {
      for (const SectorLabel& b : sector_labels(g)) {
        const Distinction d = sector_distinguish(lat, g, a, b);
        const double err = a == b ? d.gap : std::abs(d.gap - 1.0);
        worst = std::max(worst, err);
        pairs += a != b;
      }
    }
  }
  o.require(worst <= 1e-9, "gap");
  o.note << pairs << " unequal pairs, max gap error " << worst;
}

// 7. Cone algebra surrogates on a 3x3 patch.
void haag(Outcome& o) {
  const auto t0 = Clock::now();
  const Lattice lat(3, 3, Boundary::kPlane);
  const AbelianGroup g({2});
  const Region cone = cone_make(lat, 1, 1, Dir::kEast, Dir::kNorth);
  const ConeSubspace cs(lat, g, cone);
  const int expected_dim = (1 << static_cast<int>(cone.size())) * oracle::schmidt_rank(lat, {{2}}, cone);
  o.require(cs.dim() == expected_dim && cs.stabilized(), "cone space dimension");
  const auto ext = external_charge_orthogonality_check(lat, g, cs, 100, 1);
  o.require(ext.samples == 100 && ext.max_projection <= 1e-9, "external charges");
  const auto br = boundary_ribbon_check(lat, g, cs);
  o.require(br.ribbons > 0 && br.max_residual <= 1e-9, "boundary ribbons");
  const auto dens = self_adjoint_density_check(lat, g, cs);
  o.require(dens.frame_consistent && dens.target == 2 * expected_dim && dens.rank == dens.target,
            "self-adjoint density");
  o.require(dens.rank_region_only < dens.target, "negative control");
  const double t = seconds_since(t0);
  o.require(t <= 600.0, "time budget");
  o.note << "dim " << cs.dim() << ", external " << ext.max_projection << ", boundary " << br.max_residual
         << ", rank " << dens.rank << "/" << dens.target << " (region only " << dens.rank_region_only << "), " << t
         << " s";
}

// 8. Split property surrogate.
void split(Outcome& o) {
  const Lattice lat(5, 5, Boundary::kPlane);
  for (int n : {2, 3}) {
    const SplitResult r = split_check(lat, AbelianGroup({n}), 100, 1);
    o.require(r.samples == 100 && r.max_error <= 1e-10 && r.nontrivial > 0, "z" + std::to_string(n));
    o.note << "z" << n << " " << r.max_error << " (" << r.nontrivial << " nontrivial); ";
  }
}

// 9. Reports are byte-identical across runs and thread counts.
void reproducibility(Outcome& o) {
  const std::vector<RunConfig> configs = {
      {"z3", "3x3:torus", "verify", 1e-9, 5, 6, "", false},
      {"z2xz2", "5x5:plane", "smatrix", 1e-9, 5, 6, "", false},
      {"z3", "5x5:plane", "split-check", 1e-9, 5, 6, "", false},
  };
  for (const RunConfig& c : configs) {
    ::setenv("QDL_THREADS", "1", 1);
    const std::string a = to_canonical_json(run(c));
    ::setenv("QDL_THREADS", "4", 1);
    const std::string b = to_canonical_json(run(c));
    const std::string again = to_canonical_json(run(c));
    o.require(a == b && b == again, c.experiment);
  }
  ::unsetenv("QDL_THREADS");
  o.note << configs.size() << " configurations";
}

}  // namespace
}  // namespace qd

int main() {
  const std::vector<std::pair<const char*, std::function<void(qd::Outcome&)>>> criteria = {
      {"operator identities", qd::operator_identities},
      {"ground state", qd::ground_state_checks},
      {"ribbon deformation", qd::deformation},
      {"braiding and S matrix", qd::braiding},
      {"fusion", qd::fusion},
      {"sector distinction", qd::distinguish},
      {"cone algebra surrogates", qd::haag},
      {"split property", qd::split},
      {"reproducibility", qd::reproducibility},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    qd::Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [error: " << e.what() << "]";
    }
    all = all && o.pass;
    std::printf("criterion %zu %s: %s: %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.note.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
