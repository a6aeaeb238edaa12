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

#include "qdouble/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <thread>

#include "qdouble/duality.hpp"
#include "qdouble/ground.hpp"
#include "qdouble/ops.hpp"
#include "qdouble/sectors.hpp"

namespace qd {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"verify", "groundstate", "haag-check", "split-check",
                                                 "fusion", "braid",       "smatrix"};
  return names;
}

int worker_count() {
  if (const char* env = std::getenv("QDL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Check> run_parallel(const std::vector<std::function<Check()>>& jobs, int threads) {
  std::vector<Check> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace {

cplx phase_of(const AbelianGroup& g, int chi, int x) { return g.char_eval(chi, x); }

bool has_both_kinds(const Ribbon& r) {
  bool direct = false;
  bool dual = false;
  for (const auto& t : r.triangles()) (t.kind == TriangleKind::kDirect ? direct : dual) = true;
  return direct && dual;
}

// Open ribbons with both triangle kinds whose end sites share neither
// vertex nor face, drawn with the seed.
std::vector<Ribbon> sample_open_ribbons(const Lattice& lat, std::mt19937_64& rng, std::size_t count, int max_len) {
  std::vector<Ribbon> pool;
  for (auto& r : enumerate_ribbons(lat, Region::all(lat), max_len)) {
    if (r.closed() || r.size() < 2 || !has_both_kinds(r)) continue;
    const Site s0 = *r.start();
    const Site s1 = *r.end();
    if (s0.vertex == s1.vertex || s0.face == s1.face) continue;
    if (!lat.has_full_star(s0.vertex) || !lat.has_full_star(s1.vertex)) continue;
    pool.push_back(std::move(r));
  }
  if (pool.empty()) throw GeometryError("no open ribbon fits the lattice");
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  return pool;
}

std::vector<Ribbon> closed_ribbons(const Lattice& lat) {
  std::vector<Ribbon> out;
  for (const Site& s : lat.sites()) {
    if (!lat.has_full_star(s.vertex)) continue;
    out.push_back(alpha_ribbon(lat, s));
    out.push_back(beta_ribbon(lat, s));
    break;
  }
  if (lat.torus()) {
    // Non-contractible loop once around the x direction.
    const int v = lat.vertex(0, 0);
    const Site s{v, lat.quadrant_face(v, 3)};
    out.push_back(ribbon_walk(lat, s, std::string(static_cast<std::size_t>(lat.width()), 'E'), 3));
  }
  for (const auto& r : out) {
    if (!r.closed()) throw std::logic_error("expected a closed ribbon");
  }
  return out;
}

struct Suite {
  const Lattice& lat;
  const AbelianGroup& g;
  double tol;
  std::vector<Ribbon> ribbons;

  int n() const { return g.order(); }
  double diff(const LinearOp& a, const LinearOp& b) const { return max_difference(a, b, lat.num_edges()); }
  double comm(const LinearOp& a, const LinearOp& b) const { return commutator_norm(a, b, lat.num_edges()); }
  LinearOp zero() const { return LinearOp(g); }
  LinearOp F(const Ribbon& r, int shift, int proj) const { return ribbon_F(g, r, shift, proj); }
  LinearOp Fi(const Ribbon& r, int chi, int c) const { return ribbon_F_irrep(g, r, chi, c); }
  std::vector<Site> face_sites() const {
    std::vector<Site> out;
    for (int f = 0; f < lat.num_faces(); ++f) {
      const Site s{lat.corners(f)[0], f};
      if (lat.has_full_star(s.vertex)) out.push_back(s);
    }
    return out;
  }

  Check star_plaquette_algebra() const {
    double err = 0.0;
    const auto sites = face_sites();
    for (const Site& s : sites) {
      for (int a = 0; a < n(); ++a) {
        for (int b = 0; b < n(); ++b) {
          err = std::max(err, diff(star_op(lat, g, s, a) * star_op(lat, g, s, b), star_op(lat, g, s, g.mul(a, b))));
          const LinearOp bb = plaq_op(lat, g, s, a) * plaq_op(lat, g, s, b);
          err = std::max(err, diff(bb, a == b ? plaq_op(lat, g, s, a) : zero()));
          err = std::max(err, comm(star_op(lat, g, s, a), plaq_op(lat, g, s, b)));
        }
      }
      const LinearOp as = star_proj(lat, g, s);
      const LinearOp bs = plaq_proj(lat, g, s);
      err = std::max({err, diff(as * as, as), diff(as.adjoint(), as), diff(bs * bs, bs), diff(bs.adjoint(), bs)});
    }
    for (const Site& s : sites) {
      for (const Site& t : sites) err = std::max(err, comm(star_proj(lat, g, s), plaq_proj(lat, g, t)));
    }
    return make_check("star_plaquette_algebra", "star and plaquette operator relations", err, tol,
                      {{"sites", sites.size()}});
  }

  Check endpoint_relations() const {
    double err = 0.0;
    for (const Ribbon& r : ribbons) {
      const Site s0 = *r.start();
      const Site s1 = *r.end();
      for (int h = 0; h < n(); ++h) {
        for (int x = 0; x < n(); ++x) {
          const LinearOp f = F(r, h, x);
          for (int k = 0; k < n(); ++k) {
            const LinearOp a0 = star_op(lat, g, s0, k);
            const LinearOp a1 = star_op(lat, g, s1, k);
            err = std::max(err, diff(a0 * f, F(r, h, g.mul(k, x)) * a0));
            err = std::max(err, diff(a1 * f, F(r, h, g.mul(x, g.inv(k))) * a1));
            err = std::max(err, diff(plaq_op(lat, g, s0, k) * f, f * plaq_op(lat, g, s0, g.mul(k, h))));
            err = std::max(err, diff(plaq_op(lat, g, s1, k) * f, f * plaq_op(lat, g, s1, g.mul(g.inv(h), k))));
          }
        }
      }
    }
    return make_check("endpoint_relations", "star and plaquette operators at ribbon ends", err, tol,
                      {{"ribbons", ribbons.size()}});
  }

  Check product_rule() const {
    double err = 0.0;
    for (const Ribbon& r : ribbons) {
      for (int a = 0; a < n(); ++a) {
        for (int b = 0; b < n(); ++b) {
          for (int c = 0; c < n(); ++c) {
            for (int d = 0; d < n(); ++d) {
              err = std::max(err, diff(F(r, a, b) * F(r, c, d), b == d ? F(r, g.mul(a, c), d) : zero()));
              err = std::max(err, diff(Fi(r, a, b) * Fi(r, c, d), Fi(r, g.char_mul(a, c), g.mul(b, d))));
            }
          }
        }
      }
    }
    return make_check("ribbon_product_rule", "ribbon operator product rule", err, tol, {{"ribbons", ribbons.size()}});
  }

  Check adjoint_rule() const {
    double err = 0.0;
    for (const Ribbon& r : ribbons) {
      for (int a = 0; a < n(); ++a) {
        for (int b = 0; b < n(); ++b) {
          err = std::max(err, diff(F(r, a, b).adjoint(), F(r, g.inv(a), b)));
          err = std::max(err, diff(Fi(r, a, b).adjoint(), Fi(r, g.char_conj(a), g.inv(b))));
          err = std::max(err, diff(Fi(r, a, b) * Fi(r, g.char_conj(a), g.inv(b)), LinearOp::identity(g)));
        }
      }
    }
    return make_check("ribbon_adjoint_rule", "ribbon operator adjoint", err, tol, {{"ribbons", ribbons.size()}});
  }

  Check disjoint_commutation() const {
    double err = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < ribbons.size(); ++i) {
      for (std::size_t j = i + 1; j < ribbons.size(); ++j) {
        if (ribbons_overlap(ribbons[i], ribbons[j])) continue;
        ++pairs;
        for (int a = 0; a < n(); ++a) {
          for (int b = 0; b < n(); ++b) {
            for (int c = 0; c < n(); ++c) {
              for (int d = 0; d < n(); ++d) err = std::max(err, comm(F(ribbons[i], a, b), F(ribbons[j], c, d)));
            }
          }
        }
      }
    }
    Check out = make_check("disjoint_ribbons_commute", "disjoint ribbon operators commute", err, tol,
                           {{"pairs", pairs}});
    out.pass = out.pass && pairs > 0;
    return out;
  }

  Check closed_commutation() const {
    double err = 0.0;
    const auto loops = closed_ribbons(lat);
    const auto sites = face_sites();
    for (const Ribbon& r : loops) {
      for (int h = 0; h < n(); ++h) {
        for (int x = 0; x < n(); ++x) {
          const LinearOp f = F(r, h, x);
          for (const Site& s : sites) {
            for (int k = 0; k < n(); ++k) {
              err = std::max(err, comm(f, star_op(lat, g, s, k)));
              err = std::max(err, comm(f, plaq_op(lat, g, s, k)));
            }
          }
        }
      }
    }
    return make_check("closed_ribbon_commutation", "closed ribbons commute with stars and plaquettes", err, tol,
                      {{"loops", loops.size()}});
  }

  Check irrep_endpoint_relations() const {
    double err = 0.0;
    for (const Ribbon& r : ribbons) {
      const Site s = *r.start();
      for (int chi = 0; chi < n(); ++chi) {
        for (int c = 0; c < n(); ++c) {
          const LinearOp f = Fi(r, chi, c);
          err = std::max(err, diff(f.adjoint(), Fi(r, g.char_conj(chi), g.inv(c))));
          for (int k = 0; k < n(); ++k) {
            const LinearOp a = star_op(lat, g, s, k);
            err = std::max(err, diff(a * f, phase_of(g, chi, k) * (f * a)));
            err = std::max(err, diff(plaq_op(lat, g, s, k) * f, f * plaq_op(lat, g, s, g.mul(k, g.inv(c)))));
          }
        }
      }
    }
    return make_check("irrep_endpoint_relations", "irrep ribbon operators at the start site", err, tol,
                      {{"ribbons", ribbons.size()}});
  }

  Check trivial_charge() const {
    double err = 0.0;
    int violations = 0;
    int cases = 0;
    for (const Ribbon& r : ribbons) {
      for (const Site& s : {*r.start(), *r.end()}) {
        const LinearOp as = star_proj(lat, g, s);
        const LinearOp bs = plaq_proj(lat, g, s);
        for (int chi = 0; chi < n(); ++chi) {
          for (int c = 0; c < n(); ++c) {
            const LinearOp f = Fi(r, chi, c);
            const double na = comm(f, as);
            const double nb = comm(f, bs);
            // Zero commutator exactly when the label is trivial.
            if (chi == 0) err = std::max(err, na);
            if (c == 0) err = std::max(err, nb);
            violations += ((na <= tol) != (chi == 0)) + ((nb <= tol) != (c == 0));
            cases += 2;
          }
        }
      }
    }
    Check out = make_check("trivial_charge_criterion", "commutation with A_s or B_s iff trivial label", err, tol,
                           {{"cases", cases}, {"violations", violations}});
    out.pass = out.pass && violations == 0;
    return out;
  }

  Check irrep_decomposition() const {
    double err = 0.0;
    int splits = 0;
    for (const Ribbon& r : ribbons) {
      for (std::size_t k = 1; k < r.size(); ++k) {
        ++splits;
        for (int chi = 0; chi < n(); ++chi) {
          for (int c = 0; c < n(); ++c) {
            err = std::max(err, diff(Fi(r, chi, c), Fi(r.prefix(k), chi, c) * Fi(r.suffix(k), chi, c)));
          }
        }
      }
    }
    return make_check("irrep_decomposition", "irrep ribbon operator splits along the ribbon", err, tol,
                      {{"splits", splits}});
  }

  Check crossing_relation() const {
    const int cx = lat.width() / 2;
    const int cy = lat.height() / 2;
    const int v0 = lat.vertex(cx - 1, cy);
    const int v1 = lat.vertex(cx, cy - 1);
    const Ribbon rho = ribbon_walk(lat, {v0, lat.quadrant_face(v0, 3)}, "EE");
    const Ribbon sigma = ribbon_walk(lat, {v1, lat.quadrant_face(v1, 0)}, "NN");
    double err = 0.0;
    for (const auto& a : sector_labels(g)) {
      for (const auto& b : sector_labels(g)) {
        const LinearOp fr = sector_op(g, a, rho);
        const LinearOp fs = sector_op(g, b, sigma);
        err = std::max(err, diff(fr * fs, braid_formula(g, a, b) * (fs * fr)));
      }
    }
    return make_check("crossing_relation", "single crossing of irrep ribbons", err, tol);
  }
};

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Experiments.

void groundstate(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  const double tol = cfg.tol;
  if (lat.torus()) {
    const auto space = ground_space(lat, g);
    const int dim = static_cast<int>(space.size());
    rep.checks.push_back(make_check("ground_space_dimension", "torus ground space of an abelian model",
                                    std::abs(dim - g.order() * g.order()), 0.5,
                                    {{"dimension", dim}, {"expected", g.order() * g.order()}}));
    const LinearOp h = hamiltonian(lat, g, Region::all(lat));
    const int terms = hamiltonian_term_count(lat, Region::all(lat));
    double energy_err = 0.0;
    double ortho_err = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
      energy_err = std::max(energy_err, std::abs(expectation(space[i], h) + static_cast<double>(terms)));
      for (std::size_t j = 0; j < space.size(); ++j) {
        ortho_err = std::max(ortho_err, std::abs(inner(space[i], space[j]) - (i == j ? 1.0 : 0.0)));
      }
    }
    rep.checks.push_back(make_check("ground_energy", "frustration-free ground energy", energy_err, tol,
                                    {{"energy", -terms}}));
    rep.checks.push_back(make_check("ground_space_orthonormal", "plumbing", ortho_err, tol));
    return;
  }
  const SparseState omega = ground_state(lat, g);
  const auto flats = flat_connections(lat, g);
  double stab = 0.0;
  int stars = 0;
  int plaqs = 0;
  for (int v = 0; v < lat.num_vertices(); ++v) {
    if (!lat.has_full_star(v)) continue;
    stab = std::max(stab, std::abs(expectation(omega, star_proj(lat, g, Site{v, lat.quadrant_face(v, 0)})) - 1.0));
    ++stars;
  }
  for (int f = 0; f < lat.num_faces(); ++f) {
    stab = std::max(stab, std::abs(expectation(omega, plaq_proj(lat, g, Site{lat.corners(f)[0], f})) - 1.0));
    ++plaqs;
  }
  rep.checks.push_back(make_check("stabilizer_expectations", "vacuum expectation of stars and plaquettes", stab,
                                  tol, {{"stars", stars}, {"plaquettes", plaqs}}));
  rep.checks.push_back(make_check("ground_state_support", "plumbing",
                                  std::abs(static_cast<double>(omega.size()) - static_cast<double>(flats.size())),
                                  0.5, {{"flat_connections", flats.size()}}));

  // Connection projectors on the whole patch and on its corner face.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> label(0, g.order() - 1);
  double proj_err = 0.0;
  int flat_samples = 0;
  int nonflat_samples = 0;
  struct FaceSet {
    std::vector<int> faces;
    double flat_count;
  };
  std::vector<FaceSet> sets;
  {
    std::vector<int> all(lat.num_faces());
    for (int f = 0; f < lat.num_faces(); ++f) all[f] = f;
    sets.push_back({all, static_cast<double>(flats.size())});
    const Lattice corner(2, 2, Boundary::kPlane);
    sets.push_back({{lat.face(0, 0)}, static_cast<double>(flat_connections(corner, g).size())});
  }
  for (const auto& fs : sets) {
    std::set<int> edges;
    for (int f : fs.faces) {
      for (const auto& se : lat.plaq_edges(f)) edges.insert(se.edge);
    }
    for (int t = 0; t < 40; ++t) {
      Config x(lat.num_edges(), 0);
      if (t % 2 == 0) {
        x = flats[std::uniform_int_distribution<std::size_t>(0, flats.size() - 1)(rng)];
      } else {
        for (int e : edges) x[e] = static_cast<std::uint16_t>(label(rng));
      }
      std::map<int, int> assign;
      for (int e : edges) assign[e] = x[e];
      bool flat = true;
      for (int f : fs.faces) flat = flat && face_flux(lat, g, f, x) == g.identity();
      const cplx w = expectation(omega, connection_projector(lat, g, fs.faces, assign));
      proj_err = std::max(proj_err, std::abs(w - (flat ? 1.0 / fs.flat_count : 0.0)));
      (flat ? flat_samples : nonflat_samples)++;
    }
  }
  rep.checks.push_back(make_check("connection_projectors", "vacuum weight of a connection", proj_err, tol,
                                  {{"flat_samples", flat_samples}, {"nonflat_samples", nonflat_samples}}));
}

// Lemmas about ribbon operators acting on the plane vacuum.
void vacuum_lemmas(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  const auto d = deformation_check(lat, g, 200, cfg.seed);
  rep.checks.push_back(make_check("ribbon_deformation", "vacuum action depends only on the end sites", d.max_error,
                                  cfg.tol, {{"pairs", d.pairs}, {"attempts", d.attempts}}));
  const auto inv = inversion_check(lat, g, 200, cfg.seed);
  rep.checks.push_back(make_check("ribbon_inversion", "reversed ribbons with inverted labels", inv.max_error,
                                  cfg.tol, {{"samples", inv.samples}, {"nonzero", inv.nonzero}}));
  const auto tech = tech_lemma_check(lat, g, 2, 20, cfg.seed);
  rep.checks.push_back(make_check("fused_charge_ribbons", "charges created by a single ribbon", tech.max_error,
                                  cfg.tol, {{"samples", tech.samples}}));
}

void haag_check(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  if (lat.torus()) throw GeometryError("haag-check runs on a plane patch");
  const Region cone = cone_make(lat, 1, 1, Dir::kEast, Dir::kNorth);
  const ConeSubspace cs(lat, g, cone, cfg.cap);
  rep.checks.push_back(make_check("cone_subspace_invariance", "plumbing", cs.invariance_error(), cfg.tol,
                                  {{"dim", cs.dim()},
                                   {"region_edges", cone.size()},
                                   {"generators", cs.num_generators()},
                                   {"dim_previous_cap", cs.dim_previous_cap()},
                                   {"stabilized", cs.stabilized()}}));
  const auto ext = external_charge_orthogonality_check(lat, g, cs, 100, cfg.seed, cfg.cap);
  Check c = make_check("external_charge_orthogonality", "external charges are orthogonal to the cone space",
                       ext.max_projection, cfg.tol, {{"samples", ext.samples}, {"attempts", ext.attempts}});
  c.pass = c.pass && ext.samples == 100;
  rep.checks.push_back(c);
  const auto br = boundary_ribbon_check(lat, g, cs, cfg.cap);
  c = make_check("boundary_ribbons", "boundary-connecting external ribbons stay in the cone space", br.max_residual,
                 cfg.tol, {{"ribbons", br.ribbons}});
  c.pass = c.pass && br.ribbons > 0;
  rep.checks.push_back(c);
  const auto dens = self_adjoint_density_check(lat, g, cs);
  c = make_check("self_adjoint_density", "self-adjoint generating family is dense",
                 std::abs(dens.rank - dens.target), 0.5,
                 {{"target", dens.target},
                  {"rank", dens.rank},
                  {"schmidt_rank", dens.schmidt_rank},
                  {"complement_ops", dens.complement_ops}});
  c.pass = c.pass && dens.frame_consistent;
  rep.checks.push_back(c);
  rep.checks.push_back(make_check("density_negative_control", "plumbing",
                                  dens.rank_region_only < dens.target ? 0.0 : 1.0, 0.5,
                                  {{"rank_region_only", dens.rank_region_only}, {"target", dens.target}}));
}

void split(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  const auto r = split_check(lat, g, 100, cfg.seed);
  rep.checks.push_back(make_check("product_state_factorization", "vacuum factorizes on separated observables",
                                  r.max_error, cfg.tol,
                                  {{"samples", r.samples}, {"attempts", r.attempts}, {"nontrivial", r.nontrivial}}));
}

void fusion(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  const auto t = fusion_table(lat, g);
  Check c = make_check("fusion_rules", "fusion of abelian charges", t.max_error, cfg.tol);
  c.pass = c.pass && t.group_law;
  rep.checks.push_back(c);
  json rows = json::array();
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    for (std::size_t j = 0; j < t.labels.size(); ++j) {
      rows.push_back({format_label(g, t.labels[i]), format_label(g, t.labels[j]), format_label(g, t.measured[i][j]),
                      format_label(g, fuse(g, t.labels[i], t.labels[j]))});
    }
  }
  rep.tables["fusion"] = {{"columns", {"a", "b", "measured", "expected"}}, {"rows", rows}};
}

void braid(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  double err = 0.0;
  double swapped_err = 0.0;
  json rows = json::array();
  for (const auto& a : sector_labels(g)) {
    for (const auto& b : sector_labels(g)) {
      const auto r = braiding_phase(lat, g, a, b);
      const auto s = braiding_phase(lat, g, a, b, true);
      err = std::max(err, r.error);
      swapped_err = std::max(swapped_err, s.error);
      rows.push_back({format_label(g, a), format_label(g, b), cjson(r.lambda), cjson(r.expected), cjson(s.lambda)});
    }
  }
  rep.checks.push_back(make_check("crossing_phase", "single crossing phase", err, cfg.tol));
  rep.checks.push_back(make_check("crossing_reversal", "reversed crossing conjugates the phase", swapped_err, cfg.tol));
  rep.tables["braid"] = {{"columns", {"a", "b", "lambda", "expected", "lambda_reversed"}}, {"rows", rows}};
}

void smatrix(const Lattice& lat, const AbelianGroup& g, const RunConfig& cfg, Report& rep) {
  const auto s = s_matrix(lat, g);
  const auto mirrored = s_matrix(lat, g, true);
  const auto deformed = s_matrix(lat, g, false, true);
  const std::size_t n = s.labels.size();
  double mirror_err = 0.0;
  double deform_err = 0.0;
  double self_err = 0.0;
  double vacuum_err = 0.0;
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = s.labels[i];
    self_err = std::max(self_err, std::abs(s.simulated[i][i] - std::pow(std::conj(g.char_eval(a.chi, a.c)), 2)));
    for (std::size_t j = 0; j < n; ++j) {
      mirror_err = std::max(mirror_err, std::abs(mirrored.simulated[i][j] - std::conj(s.formula[i][j])));
      deform_err = std::max(deform_err, std::abs(deformed.simulated[i][j] - s.simulated[i][j]));
      if (i == 0) vacuum_err = std::max(vacuum_err, std::abs(s.simulated[0][j] - 1.0));
      rows.push_back({format_label(g, a), format_label(g, s.labels[j]), cjson(s.simulated[i][j]),
                      cjson(s.formula[i][j]), cjson(s.normalized[i][j])});
    }
  }
  rep.checks.push_back(make_check("double_exchange", "double exchange matrix", s.max_error, cfg.tol));
  rep.checks.push_back(make_check("exchange_back", "moving the first charge away avoids the second",
                                  s.exchange_back_error, cfg.tol));
  rep.checks.push_back(make_check("mirror_conjugates", "plumbing", mirror_err, cfg.tol));
  rep.checks.push_back(make_check("deformation_invariance", "ribbon deformation", deform_err, cfg.tol));
  rep.checks.push_back(make_check("self_exchange", "double self exchange", self_err, cfg.tol));
  rep.checks.push_back(make_check("vacuum_row", "plumbing", vacuum_err, cfg.tol));
  if (g.orders() == std::vector<int>{2}) {
    // Labels (0;0), (0;1), (1;0), (1;1): vacuum, flux, charge, dyon.
    static const double kToric[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    double toric_err = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) toric_err = std::max(toric_err, std::abs(s.simulated[i][j] - kToric[i][j]));
    }
    rep.checks.push_back(make_check("toric_code_pattern", "toric code double exchange", toric_err, cfg.tol));
  }
  rep.tables["smatrix"] = {{"columns", {"a", "b", "simulated", "formula", "normalized"}}, {"rows", rows}};
}

}  // namespace

std::vector<Check> identity_suite(const Lattice& lat, const AbelianGroup& g, double tol, std::uint64_t seed,
                                  int threads) {
  std::mt19937_64 rng(seed);
  auto suite = std::make_shared<Suite>(Suite{lat, g, tol, sample_open_ribbons(lat, rng, 6, 4)});
  std::vector<std::function<Check()>> jobs = {
      [suite] { return suite->star_plaquette_algebra(); }, [suite] { return suite->endpoint_relations(); },
      [suite] { return suite->product_rule(); },           [suite] { return suite->adjoint_rule(); },
      [suite] { return suite->disjoint_commutation(); },   [suite] { return suite->closed_commutation(); },
      [suite] { return suite->irrep_endpoint_relations(); }, [suite] { return suite->trivial_charge(); },
      [suite] { return suite->irrep_decomposition(); },    [suite] { return suite->crossing_relation(); },
  };
  return run_parallel(jobs, threads);
}

Report run(const RunConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  const AbelianGroup g = parse_group(config.group);
  const Lattice lat = parse_lattice(config.lattice);
  Report rep;
  rep.experiment = config.experiment;
  rep.config = config;
  try {
    if (config.experiment == "verify") {
      rep.checks = identity_suite(lat, g, config.tol, config.seed, worker_count());
      if (!lat.torus()) vacuum_lemmas(lat, g, config, rep);
    } else if (config.experiment == "groundstate") {
      groundstate(lat, g, config, rep);
    } else if (config.experiment == "haag-check") {
      haag_check(lat, g, config, rep);
    } else if (config.experiment == "split-check") {
      split(lat, g, config, rep);
    } else if (config.experiment == "fusion") {
      fusion(lat, g, config, rep);
    } else if (config.experiment == "braid") {
      braid(lat, g, config, rep);
    } else if (config.experiment == "smatrix") {
      smatrix(lat, g, config, rep);
    } else {
      throw UnknownExperiment("unknown experiment '" + config.experiment + "'");
    }
  } catch (const GeometryError& e) {
    throw GeometryError(config.experiment + " on " + lat.name() + " with " + g.name() + ": " + e.what());
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace qd
