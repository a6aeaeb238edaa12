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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "qdouble/ground.hpp"

namespace qd {

SectorLabel conjugate(const AbelianGroup& g, const SectorLabel& a) { return {g.char_conj(a.chi), g.inv(a.c)}; }

SectorLabel fuse(const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b) {
  return {g.char_mul(a.chi, b.chi), g.mul(a.c, b.c)};
}

std::vector<SectorLabel> sector_labels(const AbelianGroup& g) {
  std::vector<SectorLabel> out;
  for (int chi = 0; chi < g.order(); ++chi) {
    for (int c = 0; c < g.order(); ++c) out.push_back({chi, c});
  }
  return out;
}

std::string format_label(const AbelianGroup& g, const SectorLabel& a) {
  auto join = [](const std::vector<int>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
    return s;
  };
  return "(" + join(g.character(a.chi).residues) + ";" + join(g.element(a.c).residues) + ")";
}

LinearOp sector_op(const AbelianGroup& g, const SectorLabel& a, const Ribbon& r) {
  return ribbon_F_irrep(g, r, a.chi, a.c);
}

SparseState charged_state(const AbelianGroup& g, const SparseState& base, const SectorLabel& a, const Ribbon& r) {
  if (r.closed()) throw GeometryError("charged states need an open ribbon");
  return sector_op(g, a, r).apply(base).normalized();
}

SparseState charged_state(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& r) {
  return charged_state(g, ground_state(lat, g), a, r);
}

cplx detected_charge(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& r,
                     const Site& s, const SectorLabel& detect) {
  const LinearOp f = sector_op(g, a, r);
  return vacuum_expectation(lat, f.adjoint() * charge_projector(lat, g, s, detect.chi, detect.c) * f);
}

namespace {

Site quadrant_site(const Lattice& lat, int x, int y, int q) {
  const int v = lat.vertex(x, y);
  const int f = lat.quadrant_face(v, q);
  if (f < 0) throw GeometryError("site outside the patch");
  return {v, f};
}

// The single basis state x -> amp y of a product of phase/shift actions.
struct Image {
  Config config;
  cplx amp = 0.0;
  bool alive = false;
};

Image image_of(const LinearOp& op, const Config& x) {
  if (op.terms().size() != 1) throw std::logic_error("expected a single basis action");
  Image out{x, 1.0, false};
  out.alive = op.terms()[0].apply(op.group(), out.config, out.amp);
  return out;
}

// Scalar s with a x = s b x on the first basis state where both survive.
cplx relative_phase(const LinearOp& a, const LinearOp& b, int num_edges) {
  const Config zero(num_edges, 0);
  auto try_config = [&](const Config& x, cplx& out) {
    const Image ia = image_of(a, x);
    const Image ib = image_of(b, x);
    if (!ia.alive || !ib.alive || std::abs(ib.amp) == 0.0) return false;
    if (ia.config != ib.config) throw std::logic_error("operators differ by more than a phase");
    out = ia.amp / ib.amp;
    return true;
  };
  cplx out;
  if (try_config(zero, out)) return out;
  std::set<int> s;
  for (int e : a.support()) s.insert(e);
  for (int e : b.support()) s.insert(e);
  const std::vector<int> support(s.begin(), s.end());
  const int n = a.group().order();
  std::size_t count = 1;
  for (std::size_t i = 0; i < support.size() && count <= kMatrixCap; ++i) count *= n;
  count = std::min(count, kMatrixCap);
  Config x = zero;
  for (std::size_t idx = 1; idx < count; ++idx) {
    std::size_t rest = idx;
    for (int e : support) {
      x[e] = static_cast<std::uint16_t>(rest % n);
      rest /= n;
    }
    if (try_config(x, out)) return out;
  }
  throw std::runtime_error("no basis state survives both operators");
}

}  // namespace

Distinction sector_distinguish(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a,
                               const SectorLabel& b) {
  if (lat.torus()) throw GeometryError("sector distinction runs on a plane patch");
  const int cx = lat.width() / 2;
  const int cy = lat.height() / 2;
  const Site near = quadrant_site(lat, cx, cy, 0);
  const Ribbon loop = closed_loop_around(lat, near, 1);
  const Site far = quadrant_site(lat, cx + 2, cy, 2);
  if (!loop_encloses(lat, near, 1, near) || loop_encloses(lat, near, 1, far)) {
    throw GeometryError("charge placement does not straddle the loop");
  }
  const Ribbon r = ribbon_between(lat, near, far, Region::all(lat));
  const LinearOp fa = sector_op(g, a, r);
  const LinearOp fb = sector_op(g, b, r);
  Distinction out;
  for (const SectorLabel& k : sector_labels(g)) {
    const LinearOp proj = loop_charge_projector(g, loop, k.chi, k.c);
    const cplx va = vacuum_expectation(lat, fa.adjoint() * proj * fa);
    const cplx vb = vacuum_expectation(lat, fb.adjoint() * proj * fb);
    const double gap = std::abs(va - vb);
    if (gap > out.gap + kRankTol) {
      out.gap = gap;
      out.loop = k;
      out.value_a = va;
      out.value_b = vb;
    }
  }
  out.found = std::abs(out.gap - 1.0) <= kRankTol;
  return out;
}

Transporter transporter(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& rho1,
                        const Ribbon& rho2, int n) {
  if (rho1.trivial() || rho2.trivial() || *rho1.start() != *rho2.start()) {
    throw GeometryError("transporter ribbons must share their start site");
  }
  if (n < 1 || n > static_cast<int>(std::min(rho1.size(), rho2.size()))) {
    throw GeometryError("truncation exceeds a ribbon length");
  }
  Transporter t{LinearOp(g), rho1.prefix(n), rho2.prefix(n), Ribbon()};
  std::vector<int> allowed;
  const auto used = t.head1.edges();
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (std::find(used.begin(), used.end(), e) == used.end()) allowed.push_back(e);
  }
  t.connector = ribbon_between(lat, *t.head1.end(), *t.head2.end(), Region(lat, allowed));
  const Ribbon path = ribbon_concat(t.head1, t.connector);
  t.op = sector_op(g, a, t.head2) * sector_op(g, conjugate(g, a), path);
  return t;
}

namespace {

std::set<int> site_edges(const Lattice& lat, const Site& s) {
  std::set<int> out;
  for (int e : lat.incident_edges(s.vertex)) out.insert(e);
  for (const auto& se : lat.plaq_edges(s)) out.insert(se.edge);
  return out;
}

}  // namespace

TransporterCheck check_transporter(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a,
                                   const Transporter& t, int samples, std::uint64_t seed) {
  TransporterCheck out;
  out.vacuum_error = std::abs(vacuum_expectation(lat, t.op) - 1.0);
  const LinearOp f1 = sector_op(g, a, t.head1);
  const LinearOp f2 = sector_op(g, a, t.head2);
  // V F1 Omega carries the charge of F2 Omega at the start and at the end of
  // rho2^n; the end of rho1^n keeps a partner, moved there by the connector.
  const LinearOp target = f2 * sector_op(g, conjugate(g, a), t.connector);
  out.state_error = 1.0 - std::abs(vacuum_expectation(lat, target.adjoint() * t.op * f1));

  // Observables near the start, away from the connector and the far ends.
  std::set<int> banned;
  for (int e : t.connector.edges()) banned.insert(e);
  for (const Ribbon* r : {&t.head1, &t.head2}) {
    for (int e : site_edges(lat, *r->end())) banned.insert(e);
  }
  for (int e : site_edges(lat, *t.connector.start())) banned.insert(e);
  for (int e : site_edges(lat, *t.connector.end())) banned.insert(e);
  const auto [sx, sy] = lat.vertex_xy(t.head1.start()->vertex);
  std::vector<int> allowed;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (banned.count(e)) continue;
    const auto [tx, ty] = lat.vertex_xy(lat.tail(e));
    if (std::abs(tx - sx) <= 1 && std::abs(ty - sy) <= 1) allowed.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, g.order() - 1);
  const LinearOp f1a = f1.adjoint();
  const LinearOp f2a = f2.adjoint();
  for (int i = 0; i < samples; ++i) {
    const LinearOp obs = random_local_op(lat, g, allowed, rng);
    const LinearOp lhs = t.op * f1 * obs * f1a;
    const LinearOp rhs = f2 * obs * f2a * t.op;
    for (int k = 0; k < 4; ++k) {
      Config x(lat.num_edges());
      for (auto& xe : x) xe = static_cast<std::uint16_t>(label(rng));
      const SparseState b = SparseState::basis(x);
      out.intertwining_error = std::max(out.intertwining_error, distance(lhs.apply(b), rhs.apply(b)));
    }
    ++out.observables;
  }
  return out;
}

FusionTable fusion_table(const Lattice& lat, const AbelianGroup& g) {
  if (lat.torus()) throw GeometryError("fusion table runs on a plane patch");
  const int cx = (lat.width() - 1) / 2;
  const int cy = (lat.height() - 1) / 2;
  const Site near{lat.vertex(cx, cy), lat.face(cx, cy)};
  const Site far{lat.vertex(0, 0), lat.face(0, 0)};
  if (near == far) throw GeometryError("patch too small for the fusion geometry");
  const Ribbon r = ribbon_between(lat, near, far, Region::all(lat));
  FusionTable out;
  out.labels = sector_labels(g);
  const std::size_t n = out.labels.size();
  std::vector<LinearOp> detectors;
  for (const auto& d : out.labels) detectors.push_back(charge_projector(lat, g, near, d.chi, d.c));
  out.measured.assign(n, std::vector<SectorLabel>(n));
  out.group_law = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const LinearOp f = sector_op(g, out.labels[i], r) * sector_op(g, out.labels[j], r);
      const SectorLabel expect = fuse(g, out.labels[i], out.labels[j]);
      const LinearOp fa = f.adjoint();
      double best = -1.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cplx v = vacuum_expectation(lat, fa * detectors[k] * f);
        const double want = out.labels[k] == expect ? 1.0 : 0.0;
        out.max_error = std::max(out.max_error, std::abs(v - want));
        if (v.real() > best) {
          best = v.real();
          out.measured[i][j] = out.labels[k];
        }
      }
      out.group_law = out.group_law && out.measured[i][j] == expect;
    }
  }
  out.group_law = out.group_law && out.max_error <= kRankTol;
  return out;
}

cplx braid_formula(const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b) {
  return g.char_eval(a.chi, b.c) * g.char_eval(b.chi, a.c);
}

BraidResult braiding_phase(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b,
                           bool swapped) {
  const int cx = lat.width() / 2;
  const int cy = lat.height() / 2;
  if (!lat.torus() && (cx < 1 || cy < 1 || cx + 1 >= lat.width() || cy + 1 >= lat.height())) {
    throw GeometryError("patch too small for a crossing");
  }
  const Ribbon rho = ribbon_walk(lat, quadrant_site(lat, cx - 1, cy, 3), "EE");
  const Ribbon sigma = swapped ? ribbon_walk(lat, quadrant_site(lat, cx, cy + 1, 2), "SS")
                               : ribbon_walk(lat, quadrant_site(lat, cx, cy - 1, 0), "NN");
  const LinearOp fr = sector_op(g, a, rho);
  const LinearOp fs = sector_op(g, b, sigma);
  BraidResult out;
  out.lambda = relative_phase(fr * fs, fs * fr, lat.num_edges());
  out.expected = swapped ? std::conj(braid_formula(g, a, b)) : braid_formula(g, a, b);
  out.error = std::abs(out.lambda - out.expected);
  return out;
}

cplx s_formula(const AbelianGroup& g, const SectorLabel& a, const SectorLabel& b) {
  return std::conj(g.char_eval(a.chi, b.c)) * std::conj(g.char_eval(b.chi, a.c));
}

namespace {

struct ExchangeGeometry {
  Ribbon rho1;       // alpha, from the patch centre
  Ribbon rho2;       // beta, below rho1 and disjoint from it
  Ribbon crossing;   // rho2 continued across rho1
  Ribbon behind;     // same endpoints as `crossing`, around the back of alpha's start
  Ribbon back;       // alpha moved the other way from its start
};

Region region_without(const Lattice& lat, const std::set<int>& banned) {
  std::vector<int> keep;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (!banned.count(e)) keep.push_back(e);
  }
  return Region(lat, keep);
}

Ribbon route(const Lattice& lat, const Site& s0, const Site& s1, const Region& region, const char* what) {
  try {
    return ribbon_between(lat, s0, s1, region);
  } catch (const GeometryError& e) {
    throw GeometryError(std::string(what) + ": " + e.what());
  }
}

ExchangeGeometry exchange_geometry(const Lattice& lat, bool mirrored, bool deformed) {
  if (lat.torus()) throw GeometryError("exchange geometry runs on a plane patch");
  const int cx = lat.width() / 2;
  const int cy = lat.height() / 2;
  const int sgn = mirrored ? -1 : 1;
  if (cx - 2 < 0 || cx + 2 >= lat.width() || cy - 2 < 0 || cy + 2 >= lat.height()) {
    throw GeometryError("patch too small for the exchange geometry (needs 5x5)");
  }
  ExchangeGeometry geo;
  geo.rho1 = mirrored ? ribbon_walk(lat, quadrant_site(lat, cx, cy, 1), "WW")
                      : ribbon_walk(lat, quadrant_site(lat, cx, cy, 3), "EE");
  const Site s2 = quadrant_site(lat, cx + sgn, cy - 2, 0);
  geo.crossing = ribbon_walk(lat, s2, "NNNN");
  geo.rho2 = ribbon_walk(lat, s2, "N");
  if (ribbons_overlap(geo.rho1, geo.rho2)) throw GeometryError("alpha and beta ribbons intersect");

  // Keep the detour clear of every vertex alpha's ribbon touches, so that it
  // passes behind alpha's start and not around its far end.
  std::set<int> banned;
  std::set<int> verts;
  for (const Triangle& t : geo.rho1.triangles()) {
    verts.insert(t.from.vertex);
    verts.insert(t.to.vertex);
  }
  for (int v : verts) {
    for (int e : lat.incident_edges(v)) banned.insert(e);
  }
  if (deformed) {
    // Close the shortest crossing column next to alpha's row.
    const int col = cx - sgn;
    banned.insert(lat.vedge(col, cy - 1));
    banned.insert(lat.vedge(col, cy));
  }
  geo.behind = route(lat, *geo.crossing.start(), *geo.crossing.end(), region_without(lat, banned), "detour");

  // Alpha moved backwards from its start, clear of rho2. The far end of
  // rho1 sits on the rim and every route from there crosses rho1 or rho2,
  // so W keeps no connector.
  geo.back = ribbon_walk(lat, *geo.rho1.start(), mirrored ? "EE" : "WW");
  if (ribbons_overlap(geo.back, geo.rho2)) throw GeometryError("alpha's return ribbon meets beta's");
  return geo;
}

}  // namespace

SMatrixResult s_matrix(const Lattice& lat, const AbelianGroup& g, bool mirrored, bool deformed) {
  const ExchangeGeometry geo = exchange_geometry(lat, mirrored, deformed);
  SMatrixResult out;
  out.labels = sector_labels(g);
  const std::size_t n = out.labels.size();
  out.simulated.assign(n, std::vector<cplx>(n));
  out.formula.assign(n, std::vector<cplx>(n));
  out.normalized.assign(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const SectorLabel& a = out.labels[i];
    const LinearOp f1 = sector_op(g, a, geo.rho1);
    // W moves alpha to the back, away from beta.
    const LinearOp w = sector_op(g, a, geo.back) * sector_op(g, conjugate(g, a), geo.rho1);
    for (std::size_t j = 0; j < n; ++j) {
      const SectorLabel& b = out.labels[j];
      const LinearOp f2 = sector_op(g, b, geo.rho2);
      // V moves beta from its ribbon across alpha's to the detour.
      const LinearOp v = sector_op(g, b, geo.behind) * sector_op(g, conjugate(g, b), geo.crossing);
      const cplx eps_ab = relative_phase(v.adjoint() * f1 * v * f1.adjoint(), LinearOp::identity(g), lat.num_edges());
      const cplx eps_ba = relative_phase(w.adjoint() * f2 * w * f2.adjoint(), LinearOp::identity(g), lat.num_edges());
      out.exchange_back_error = std::max(out.exchange_back_error, std::abs(eps_ba - 1.0));
      out.simulated[i][j] = eps_ab * eps_ba;
      out.formula[i][j] = s_formula(g, a, b);
      out.normalized[i][j] = out.formula[i][j] / static_cast<double>(g.order());
      out.max_error = std::max(out.max_error, std::abs(out.simulated[i][j] - out.formula[i][j]));
    }
  }
  return out;
}

double selection_criterion_error(const Lattice& lat, const AbelianGroup& g, const SectorLabel& a, const Ribbon& r,
                                 int samples, std::uint64_t seed) {
  std::set<int> banned;
  for (int e : r.edges()) banned.insert(e);
  if (!r.trivial()) {
    for (int e : site_edges(lat, *r.start())) banned.insert(e);
    for (int e : site_edges(lat, *r.end())) banned.insert(e);
  }
  std::vector<int> allowed;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (!banned.count(e)) allowed.push_back(e);
  }
  const LinearOp f = sector_op(g, a, r);
  const LinearOp fa = f.adjoint();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    // Localize each sample around one random allowed edge.
    std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
    const int centre = allowed[pick(rng)];
    const auto [ex, ey] = lat.vertex_xy(lat.tail(centre));
    std::vector<int> window;
    for (int e : allowed) {
      const auto [tx, ty] = lat.vertex_xy(lat.tail(e));
      if (std::abs(tx - ex) <= 1 && std::abs(ty - ey) <= 1) window.push_back(e);
    }
    const LinearOp obs = random_local_op(lat, g, window, rng);
    worst = std::max(worst, std::abs(vacuum_expectation(lat, f * obs * fa) - vacuum_expectation(lat, obs)));
  }
  return worst;
}

}  // namespace qd
