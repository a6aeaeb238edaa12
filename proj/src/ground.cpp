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

#include "qdouble/ground.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <tuple>
#include <set>
#include <unordered_set>

namespace qd {

int face_flux(const Lattice& lat, const AbelianGroup& g, int face, const Config& x) {
  int v = g.identity();
  for (const auto& se : lat.plaq_edges(face)) v = g.mul(v, se.sign > 0 ? x[se.edge] : g.inv(x[se.edge]));
  return v;
}

bool is_flat(const Lattice& lat, const AbelianGroup& g, const Config& x) {
  for (int f = 0; f < lat.num_faces(); ++f) {
    if (face_flux(lat, g, f, x) != g.identity()) return false;
  }
  return true;
}

std::vector<Config> flat_connections(const Lattice& lat, const AbelianGroup& g, std::size_t cap) {
  const int ne = lat.num_edges();
  // Faces to check once edge e has been assigned (e is their largest edge).
  std::vector<std::vector<int>> closes(ne);
  for (int f = 0; f < lat.num_faces(); ++f) {
    int last = 0;
    for (const auto& se : lat.plaq_edges(f)) last = std::max(last, se.edge);
    closes[last].push_back(f);
  }
  std::vector<Config> out;
  Config x(ne, 0);
  auto rec = [&](auto&& self, int e) -> void {
    if (e == ne) {
      if (out.size() >= cap) throw std::length_error("flat connection count exceeds the cap");
      out.push_back(x);
      return;
    }
    for (int a = 0; a < g.order(); ++a) {
      x[e] = static_cast<std::uint16_t>(a);
      bool ok = true;
      for (int f : closes[e]) ok = ok && face_flux(lat, g, f, x) == g.identity();
      if (ok) self(self, e + 1);
    }
    x[e] = 0;
  };
  rec(rec, 0);
  return out;
}

SparseState ground_state(const Lattice& lat, const AbelianGroup& g) {
  if (lat.torus()) throw DegenerateGroundSpace("torus ground space is degenerate; use ground_space");
  const auto flats = flat_connections(lat, g);
  const double amp = 1.0 / std::sqrt(static_cast<double>(flats.size()));
  std::vector<Term> terms;
  terms.reserve(flats.size());
  for (const auto& c : flats) terms.push_back(Term{c, amp});
  return SparseState::from_terms(std::move(terms));
}

std::vector<SparseState> ground_space(const Lattice& lat, const AbelianGroup& g) {
  if (!lat.torus()) return {ground_state(lat, g)};
  const auto flats = flat_connections(lat, g);
  const int n = g.order();
  const int nv = lat.num_vertices();
  std::set<Config> seen;
  std::vector<SparseState> out;
  for (const auto& c : flats) {
    if (seen.count(c)) continue;
    // Orbit under gauge potentials with phi(0) fixed to the identity.
    std::vector<Term> terms;
    std::vector<int> phi(nv, 0);
    while (true) {
      Config y = c;
      for (int e = 0; e < lat.num_edges(); ++e) {
        y[e] = static_cast<std::uint16_t>(g.mul(g.mul(y[e], phi[lat.tail(e)]), g.inv(phi[lat.head(e)])));
      }
      if (seen.insert(y).second) terms.push_back(Term{std::move(y), 1.0});
      int i = 1;
      while (i < nv && ++phi[i] == n) phi[i++] = 0;
      if (i >= nv) break;
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(terms.size()));
    for (auto& t : terms) t.amp = amp;
    out.push_back(SparseState::from_terms(std::move(terms)));
  }
  return out;
}

LinearOp connection_projector(const Lattice& lat, const AbelianGroup& g, const std::vector<int>& faces,
                              const std::map<int, int>& assignment) {
  std::set<int> edges;
  for (int f : faces) {
    for (const auto& se : lat.plaq_edges(f)) edges.insert(se.edge);
  }
  BasisAction a;
  for (int e : edges) {
    auto it = assignment.find(e);
    if (it == assignment.end()) throw std::invalid_argument("connection does not assign edge " + std::to_string(e));
    a.atoms.push_back(Atom{Atom::Kind::kEquals, {{e, 1}}, it->second});
  }
  return LinearOp(g, std::move(a));
}

cplx expectation(const SparseState& psi, const LinearOp& op) {
  const double n2 = std::norm(psi.norm());
  if (n2 == 0.0) throw std::domain_error("expectation in the zero vector");
  return inner(psi, op.apply(psi)) / n2;
}

bool is_pure_gauge(const Lattice& lat, const AbelianGroup& g, const std::vector<int>& labels) {
  // Solve labels[e] = phi(tail) - phi(head) along a BFS tree, then verify.
  const int nv = lat.num_vertices();
  std::vector<int> phi(nv, -1);
  phi[0] = g.identity();
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int e : lat.incident_edges(v)) {
      const int t = lat.tail(e);
      const int h = lat.head(e);
      if (t == v && phi[h] < 0) {
        phi[h] = g.mul(phi[v], g.inv(labels[e]));
        queue.push_back(h);
      } else if (h == v && phi[t] < 0) {
        phi[t] = g.mul(phi[v], labels[e]);
        queue.push_back(t);
      }
    }
  }
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (labels[e] != g.mul(phi[lat.tail(e)], g.inv(phi[lat.head(e)]))) return false;
  }
  return true;
}

namespace {

struct Probe {
  Atom::Kind kind;
  int value;
  int offset;                           // contribution of earlier shifts
  std::vector<std::pair<int, int>> coeffs;  // (vertex, integer multiplicity)
};

cplx action_vacuum_expectation(const Lattice& lat, const AbelianGroup& g, const BasisAction& a, std::size_t cap) {
  std::vector<int> delta(lat.num_edges(), g.identity());
  std::vector<Probe> probes;
  for (const Atom& atom : a.atoms) {
    if (atom.kind == Atom::Kind::kShift) {
      const int neg = g.inv(atom.value);
      for (const auto& se : atom.edges) delta[se.edge] = g.mul(delta[se.edge], se.sign > 0 ? atom.value : neg);
      continue;
    }
    Probe p{atom.kind, atom.value, g.identity(), {}};
    std::map<int, int> coeff;
    for (const auto& se : atom.edges) {
      p.offset = g.mul(p.offset, se.sign > 0 ? delta[se.edge] : g.inv(delta[se.edge]));
      coeff[lat.tail(se.edge)] += se.sign;
      coeff[lat.head(se.edge)] -= se.sign;
    }
    for (auto [v, k] : coeff) {
      const int r = ((k % g.exponent()) + g.exponent()) % g.exponent();
      if (r != 0) p.coeffs.emplace_back(v, r);
    }
    probes.push_back(std::move(p));
  }
  if (!is_pure_gauge(lat, g, delta)) return 0.0;

  // Vertices seen only by character probes average out one at a time: the
  // combined character at such a vertex must be trivial.
  std::set<int> gated;
  for (const auto& p : probes) {
    if (p.kind != Atom::Kind::kEquals) continue;
    for (auto [v, k] : p.coeffs) gated.insert(v);
  }
  std::map<int, int> free_char;
  for (const auto& p : probes) {
    if (p.kind == Atom::Kind::kEquals) continue;
    for (auto [v, k] : p.coeffs) {
      if (gated.count(v)) continue;
      auto it = free_char.emplace(v, g.identity()).first;
      it->second = g.char_mul(it->second, g.pow(p.value, k));
    }
  }
  for (auto [v, chi] : free_char) {
    if (chi != g.identity()) return 0.0;
  }
  const int n = g.order();
  std::vector<const Probe*> equals;
  for (const auto& p : probes) {
    if (p.kind == Atom::Kind::kEquals) equals.push_back(&p);
  }
  if (equals.size() < gated.size()) {
    // [v == value] = |G|^-1 sum_psi conj(psi(value)) psi(v) turns every
    // probe into a character; each vertex then averages out on its own.
    std::size_t count = 1;
    for (std::size_t i = 0; i < equals.size(); ++i) {
      if (count > cap / n) throw std::length_error("vacuum expectation exceeds the enumeration cap");
      count *= n;
    }
    std::vector<int> psi(equals.size(), 0);
    cplx sum = 0.0;
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rest = idx;
      for (auto& c : psi) {
        c = static_cast<int>(rest % n);
        rest /= n;
      }
      cplx amp = 1.0;
      std::map<int, int> combined;
      std::size_t next_eq = 0;
      for (const auto& p : probes) {
        int chi = p.value;
        if (p.kind == Atom::Kind::kEquals) {
          chi = psi[next_eq++];
          amp *= std::conj(g.char_eval(chi, p.value));
        }
        amp *= g.char_eval(chi, p.offset);
        for (auto [v, k] : p.coeffs) {
          auto it = combined.emplace(v, g.identity()).first;
          it->second = g.char_mul(it->second, g.pow(chi, k));
        }
      }
      if (std::all_of(combined.begin(), combined.end(), [&](const auto& kv) { return kv.second == g.identity(); })) {
        sum += amp;
      }
    }
    return a.coeff * sum / static_cast<double>(count);
  }

  const std::vector<int> verts(gated.begin(), gated.end());
  std::map<int, int> slot;
  for (std::size_t i = 0; i < verts.size(); ++i) slot[verts[i]] = static_cast<int>(i);

  std::size_t count = 1;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (count > cap / n) throw std::length_error("vacuum expectation exceeds the enumeration cap");
    count *= n;
  }
  std::vector<int> phi(verts.size(), 0);
  cplx sum = 0.0;
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (auto& v : phi) {
      v = static_cast<int>(rest % n);
      rest /= n;
    }
    cplx amp = 1.0;
    for (const auto& p : probes) {
      int val = p.offset;
      for (auto [v, k] : p.coeffs) {
        auto it = slot.find(v);
        if (it != slot.end()) val = g.mul(val, g.pow(phi[it->second], k));
      }
      if (p.kind == Atom::Kind::kEquals) {
        if (val != p.value) {
          amp = 0.0;
          break;
        }
      } else {
        amp *= g.char_eval(p.value, val);
      }
    }
    sum += amp;
  }
  return a.coeff * sum / static_cast<double>(count);
}

}  // namespace

cplx vacuum_expectation(const Lattice& lat, const LinearOp& op, std::size_t cap) {
  cplx total = 0.0;
  for (const auto& a : op.terms()) total += action_vacuum_expectation(lat, op.group(), a, cap);
  return total;
}

LinearOp random_local_op(const Lattice& lat, const AbelianGroup& g, const std::vector<int>& allowed,
                         std::mt19937_64& rng) {
  const std::set<int> in(allowed.begin(), allowed.end());
  auto inside = [&](const std::vector<SignedEdge>& es) {
    return !es.empty() && std::all_of(es.begin(), es.end(), [&](const SignedEdge& se) { return in.count(se.edge); });
  };
  // Pools by kind: gauge maps, flux projectors, single-edge operators. A
  // kind is drawn first so the edge operators do not swamp the others.
  std::vector<std::vector<LinearOp>> pools(3);
  for (int v = 0; v < lat.num_vertices(); ++v) {
    if (!inside(lat.gauge_edges(v))) continue;
    for (int k = 1; k < g.order(); ++k) pools[0].push_back(gauge_op(lat, g, v, k));
  }
  for (int f = 0; f < lat.num_faces(); ++f) {
    const Site s{lat.corners(f)[0], f};
    if (!inside(lat.plaq_edges(s))) continue;
    for (int h = 0; h < g.order(); ++h) pools[1].push_back(plaq_op(lat, g, s, h));
  }
  for (int e : allowed) {
    for (int k = 1; k < g.order(); ++k) {
      pools[2].emplace_back(g, BasisAction{1.0, {Atom{Atom::Kind::kShift, {{e, 1}}, k}}});
      pools[2].emplace_back(g, BasisAction{1.0, {Atom{Atom::Kind::kPhase, {{e, 1}}, k}}});
    }
  }
  std::erase_if(pools, [](const auto& p) { return p.empty(); });
  if (pools.empty()) throw GeometryError("no local observable fits the allowed edges");
  auto draw = [&]() -> const LinearOp& {
    const auto& p = pools[std::uniform_int_distribution<std::size_t>(0, pools.size() - 1)(rng)];
    return p[std::uniform_int_distribution<std::size_t>(0, p.size() - 1)(rng)];
  };
  std::uniform_int_distribution<int> factors(2, 3);
  std::uniform_int_distribution<int> summands(1, 2);
  std::normal_distribution<double> normal;
  LinearOp out(g);
  for (int t = summands(rng); t > 0; --t) {
    LinearOp prod = draw();
    for (int k = factors(rng); k > 1; --k) prod = draw() * prod;
    const double re = normal(rng);
    const double im = normal(rng);
    out += cplx(re, im) * prod;
  }
  return out;
}

namespace {

std::vector<int> window_edges(const Lattice& lat, int cx, int cy) {
  std::vector<int> out;
  for (int e = 0; e < lat.num_edges(); ++e) {
    const auto [tx, ty] = lat.vertex_xy(lat.tail(e));
    const auto [hx, hy] = lat.vertex_xy(lat.head(e));
    if (std::max({std::abs(tx - cx), std::abs(hx - cx), std::abs(ty - cy), std::abs(hy - cy)}) <= 1) {
      out.push_back(e);
    }
  }
  return out;
}

// Vertices and faces met by the support of an operator.
std::pair<std::set<int>, std::set<int>> footprint(const Lattice& lat, const LinearOp& op) {
  std::set<int> verts;
  std::set<int> faces;
  for (int e : op.support()) {
    verts.insert(lat.tail(e));
    verts.insert(lat.head(e));
    for (int f : {lat.left_face(e), lat.right_face(e)}) {
      if (f >= 0) faces.insert(f);
    }
  }
  return {verts, faces};
}

bool meets(const std::set<int>& a, const std::set<int>& b) {
  return std::any_of(a.begin(), a.end(), [&](int x) { return b.count(x) > 0; });
}

}  // namespace

SplitResult split_check(const Lattice& lat, const AbelianGroup& g, int samples, std::uint64_t seed) {
  if (lat.torus()) throw GeometryError("the product-state check runs on a plane patch");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> px(0, lat.width() - 1);
  std::uniform_int_distribution<int> py(0, lat.height() - 1);
  SplitResult out;
  const int max_attempts = 1000 * std::max(samples, 1);
  while (out.samples < samples) {
    if (++out.attempts > max_attempts) throw GeometryError("patch too small for separated observable pairs");
    const int ax = px(rng);
    const int ay = py(rng);
    const LinearOp a = random_local_op(lat, g, window_edges(lat, ax, ay), rng);
    const int bx = px(rng);
    const int by = py(rng);
    const LinearOp b = random_local_op(lat, g, window_edges(lat, bx, by), rng);
    const auto [va, fa] = footprint(lat, a);
    const auto [vb, fb] = footprint(lat, b);
    if (meets(va, vb) || meets(fa, fb)) continue;
    const cplx wa = vacuum_expectation(lat, a);
    const cplx wb = vacuum_expectation(lat, b);
    // Every other pair is redrawn until both expectations are nonzero.
    if (out.samples % 2 == 0 && (std::abs(wa) < 1e-6 || std::abs(wb) < 1e-6)) continue;
    const cplx wab = vacuum_expectation(lat, a * b);
    out.max_error = std::max(out.max_error, std::abs(wab - wa * wb));
    if (std::abs(wa * wb) > 1e-3) ++out.nontrivial;
    ++out.samples;
  }
  return out;
}

namespace {

std::vector<Ribbon> open_ribbons(const Lattice& lat, int max_len) {
  std::vector<Ribbon> out;
  for (auto& r : enumerate_ribbons(lat, Region::all(lat), max_len)) {
    if (!r.closed()) out.push_back(std::move(r));
  }
  if (out.empty()) throw GeometryError("no open ribbon fits the patch");
  return out;
}

constexpr int kUnset = std::numeric_limits<int>::min();

// Integer vertex potential phi with phi(tail) - phi(head) = c(e), zero on
// the rim of the patch.
std::vector<int> vertex_potential(const Lattice& lat, const std::vector<int>& c) {
  std::vector<int> phi(lat.num_vertices(), kUnset);
  phi[0] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int e : lat.incident_edges(v)) {
      const bool out = lat.tail(e) == v;
      const int w = out ? lat.head(e) : lat.tail(e);
      const int val = out ? phi[v] - c[e] : phi[v] + c[e];
      if (phi[w] == kUnset) {
        phi[w] = val;
        queue.push_back(w);
      } else if (phi[w] != val) {
        throw std::logic_error("dual chain is not closed");
      }
    }
  }
  return phi;
}

// Integer face potential psi with psi(left) - psi(right) = d(e), zero
// outside the patch (index num_faces).
std::vector<int> face_potential(const Lattice& lat, const std::vector<int>& d) {
  const int outside = lat.num_faces();
  std::vector<int> psi(outside + 1, kUnset);
  psi[outside] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int e = 0; e < lat.num_edges(); ++e) {
      const int l = lat.left_face(e) < 0 ? outside : lat.left_face(e);
      const int r = lat.right_face(e) < 0 ? outside : lat.right_face(e);
      for (const auto& [from, to, sign] : {std::tuple{r, l, 1}, std::tuple{l, r, -1}}) {
        if (psi[from] == kUnset) continue;
        const int val = psi[from] + sign * d[e];
        if (psi[to] == kUnset) {
          psi[to] = val;
          changed = true;
        } else if (psi[to] != val) {
          throw std::logic_error("direct chain is not closed");
        }
      }
    }
  }
  return psi;
}

}  // namespace

bool is_deformation(const Lattice& lat, const Ribbon& a, const Ribbon& b) {
  if (lat.torus()) throw GeometryError("deformations are classified on a plane patch");
  if (a.trivial() || b.trivial() || a.start() != b.start() || a.end() != b.end()) return false;
  std::vector<int> c(lat.num_edges(), 0);
  std::vector<int> d(lat.num_edges(), 0);
  for (const auto& se : a.dual_path()) c[se.edge] += se.sign;
  for (const auto& se : b.dual_path()) c[se.edge] -= se.sign;
  for (const auto& se : a.direct_path()) d[se.edge] += se.sign;
  for (const auto& se : b.direct_path()) d[se.edge] -= se.sign;
  const auto phi = vertex_potential(lat, c);
  const auto psi = face_potential(lat, d);
  const Site s0 = *a.start();
  const Site s1 = *a.end();
  return phi[s0.vertex] == phi[s1.vertex] && psi[s0.face] == psi[s1.face];
}

namespace {

// Shortest route between two sites avoiding a random subset of edges that
// is a deformation of `target`. Empty when the draw fails.
std::optional<Ribbon> random_deformation(const Lattice& lat, const Ribbon& target, const Site& s0, const Site& s1,
                                         std::mt19937_64& rng) {
  std::bernoulli_distribution drop(0.35);
  std::vector<int> kept;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (!drop(rng)) kept.push_back(e);
  }
  try {
    Ribbon r = ribbon_between(lat, s0, s1, Region(lat, kept));
    if (r == target || !is_deformation(lat, target, r)) return std::nullopt;
    return r;
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

}  // namespace

DeformationResult deformation_check(const Lattice& lat, const AbelianGroup& g, int pairs, std::uint64_t seed) {
  if (lat.torus()) throw GeometryError("the deformation check runs on a plane patch");
  std::mt19937_64 rng(seed);
  const SparseState omega = ground_state(lat, g);
  const std::vector<Site> sites = lat.sites();
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  DeformationResult out;
  const int max_attempts = 200 * std::max(pairs, 1);
  while (out.pairs < pairs) {
    if (++out.attempts > max_attempts) throw GeometryError("patch too small for deformed ribbon pairs");
    const Site s0 = sites[pick(rng)];
    const Site s1 = sites[pick(rng)];
    if (s0 == s1) continue;
    const Ribbon rho = ribbon_between(lat, s0, s1, Region::all(lat));
    const auto rho2 = random_deformation(lat, rho, s0, s1, rng);
    if (!rho2) continue;
    for (int h = 0; h < g.order(); ++h) {
      for (int x = 0; x < g.order(); ++x) {
        const SparseState a = ribbon_F(g, rho, h, x).apply(omega);
        const SparseState b = ribbon_F(g, *rho2, h, x).apply(omega);
        out.max_error = std::max(out.max_error, distance(a, b));
      }
    }
    ++out.pairs;
  }
  return out;
}

InversionResult inversion_check(const Lattice& lat, const AbelianGroup& g, int samples, std::uint64_t seed) {
  if (lat.torus()) throw GeometryError("the inversion check runs on a plane patch");
  std::mt19937_64 rng(seed);
  const std::vector<Ribbon> ribbons = open_ribbons(lat, 4);
  std::uniform_int_distribution<std::size_t> pick(0, ribbons.size() - 1);
  std::uniform_int_distribution<int> label(0, g.order() - 1);
  std::uniform_int_distribution<int> px(0, lat.width() - 1);
  std::uniform_int_distribution<int> py(0, lat.height() - 1);
  // A standard ribbon running backwards along r; some short ribbons have
  // none (every standard route back winds around an end site).
  auto reverse = [&](const Ribbon& r) -> std::optional<Ribbon> {
    for (int attempt = 0; attempt < 50; ++attempt) {
      if (auto back = random_deformation(lat, ribbon_invert(r), *r.end(), *r.start(), rng)) return back;
    }
    return std::nullopt;
  };
  InversionResult out;
  const int max_attempts = 100 * std::max(samples, 1);
  while (out.samples < samples) {
    if (++out.attempts > max_attempts) throw GeometryError("patch too small for reversed ribbon pairs");
    // Even samples close rho on itself: sigma runs back from rho's end with
    // matching labels, and the draw is repeated until the expectation is
    // nonzero.
    const bool paired = out.samples % 2 == 0;
    const Ribbon rho = ribbons[pick(rng)];
    std::optional<Ribbon> sigma = paired ? reverse(rho) : ribbons[pick(rng)];
    if (!sigma) continue;
    const auto rho_bar = reverse(rho);
    const auto sigma_bar = reverse(*sigma);
    if (!rho_bar || !sigma_bar) continue;
    const int h = label(rng);
    const int x = label(rng);
    const int l = paired ? h : label(rng);
    const int k = paired ? g.inv(x) : label(rng);
    const int cx = px(rng);
    const int cy = py(rng);
    const LinearOp a = random_local_op(lat, g, window_edges(lat, cx, cy), rng);
    const cplx lhs = vacuum_expectation(lat, ribbon_F(g, rho, h, x) * a * ribbon_F(g, *sigma, l, k));
    const cplx rhs = vacuum_expectation(
        lat, ribbon_F(g, *rho_bar, g.inv(h), g.inv(x)) * a * ribbon_F(g, *sigma_bar, g.inv(l), g.inv(k)));
    if (paired && std::abs(lhs) < 1e-6 && std::abs(rhs) < 1e-6) continue;
    out.max_error = std::max(out.max_error, std::abs(lhs - rhs));
    if (std::abs(lhs) > 1e-6) ++out.nonzero;
    ++out.samples;
  }
  return out;
}

}  // namespace qd
