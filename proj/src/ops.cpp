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

#include "qdouble/ops.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qd {

namespace {

int signed_sum(const AbelianGroup& g, const std::vector<SignedEdge>& edges, const Config& x) {
  int v = g.identity();
  for (const auto& se : edges) {
    const int label = x[se.edge];
    v = g.mul(v, se.sign > 0 ? label : g.inv(label));
  }
  return v;
}

}  // namespace

bool BasisAction::apply(const AbelianGroup& g, Config& x, cplx& amp) const {
  amp *= coeff;
  for (const Atom& a : atoms) {
    switch (a.kind) {
      case Atom::Kind::kEquals:
        if (signed_sum(g, a.edges, x) != a.value) return false;
        break;
      case Atom::Kind::kPhase:
        amp *= g.char_eval(a.value, signed_sum(g, a.edges, x));
        break;
      case Atom::Kind::kShift: {
        const int neg = g.inv(a.value);
        for (const auto& se : a.edges) {
          x[se.edge] = static_cast<std::uint16_t>(g.mul(x[se.edge], se.sign > 0 ? a.value : neg));
        }
        break;
      }
    }
  }
  return true;
}

BasisAction BasisAction::adjoint(const AbelianGroup& g) const {
  BasisAction out;
  out.coeff = std::conj(coeff);
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    Atom a = *it;
    if (a.kind != Atom::Kind::kEquals) a.value = g.inv(a.value);
    out.atoms.push_back(std::move(a));
  }
  return out;
}

std::vector<int> LinearOp::support() const {
  std::set<int> s;
  for (const auto& t : terms_) {
    for (const auto& a : t.atoms) {
      for (const auto& se : a.edges) s.insert(se.edge);
    }
  }
  return {s.begin(), s.end()};
}

SparseState LinearOp::apply(const SparseState& psi) const {
  std::vector<Term> out;
  out.reserve(psi.size() * terms_.size());
  for (const auto& t : psi.terms()) {
    for (const auto& a : terms_) {
      Config x = t.config;
      cplx amp = t.amp;
      if (a.apply(*group_, x, amp)) out.push_back(Term{std::move(x), amp});
    }
  }
  return SparseState::from_terms(std::move(out));
}

SparseState LinearOp::apply_basis(const Config& x) const { return apply(SparseState::basis(x)); }

LinearOp LinearOp::adjoint() const {
  LinearOp out(*group_);
  for (const auto& t : terms_) out.terms_.push_back(t.adjoint(*group_));
  return out;
}

LinearOp& LinearOp::operator+=(const LinearOp& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

LinearOp& LinearOp::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

LinearOp operator-(LinearOp a, const LinearOp& b) { return a += (-1.0) * b; }

LinearOp operator*(const LinearOp& a, const LinearOp& b) {
  LinearOp out(a.group());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      BasisAction c;
      c.coeff = ta.coeff * tb.coeff;
      c.atoms = tb.atoms;
      c.atoms.insert(c.atoms.end(), ta.atoms.begin(), ta.atoms.end());
      out.terms_.push_back(std::move(c));
    }
  }
  return out;
}

LinearOp triangle_T(const AbelianGroup& g, const Triangle& t, int h) {
  if (t.kind != TriangleKind::kDirect) throw GeometryError("T needs a direct triangle");
  return LinearOp(g, BasisAction{1.0, {Atom{Atom::Kind::kEquals, {{t.edge, t.parallel ? 1 : -1}}, h}}});
}

LinearOp triangle_L(const AbelianGroup& g, const Triangle& t, int shift) {
  if (t.kind != TriangleKind::kDual) throw GeometryError("L needs a dual triangle");
  return LinearOp(g, BasisAction{1.0, {Atom{Atom::Kind::kShift, {{t.edge, t.parallel ? 1 : -1}}, shift}}});
}

LinearOp ribbon_F(const AbelianGroup& g, const Ribbon& r, int g_label, int h_label) {
  if (r.trivial()) return LinearOp::identity(g);
  BasisAction a;
  a.atoms.push_back(Atom{Atom::Kind::kEquals, r.direct_path(), h_label});
  const auto dual = r.dual_path();
  if (!dual.empty()) a.atoms.push_back(Atom{Atom::Kind::kShift, dual, g_label});
  return LinearOp(g, std::move(a));
}

LinearOp ribbon_F_irrep(const AbelianGroup& g, const Ribbon& r, int chi, int c) {
  if (r.trivial()) return LinearOp::identity(g);
  BasisAction a;
  const auto direct = r.direct_path();
  if (!direct.empty()) a.atoms.push_back(Atom{Atom::Kind::kPhase, direct, g.char_conj(chi)});
  const auto dual = r.dual_path();
  if (!dual.empty()) a.atoms.push_back(Atom{Atom::Kind::kShift, dual, g.inv(c)});
  return LinearOp(g, std::move(a));
}

LinearOp gauge_op(const Lattice& lat, const AbelianGroup& g, int v, int shift) {
  return LinearOp(g, BasisAction{1.0, {Atom{Atom::Kind::kShift, lat.gauge_edges(v), shift}}});
}

LinearOp star_op(const Lattice& lat, const AbelianGroup& g, const Site& s, int shift) {
  lat.star_edges(s.vertex);  // throws on a truncated star
  return gauge_op(lat, g, s.vertex, shift);
}

LinearOp plaq_op(const Lattice& lat, const AbelianGroup& g, const Site& s, int h) {
  return LinearOp(g, BasisAction{1.0, {Atom{Atom::Kind::kEquals, lat.plaq_edges(s), h}}});
}

LinearOp gauge_proj(const Lattice& lat, const AbelianGroup& g, int v) {
  LinearOp out(g);
  for (int k = 0; k < g.order(); ++k) out += gauge_op(lat, g, v, k);
  return (1.0 / g.order()) * out;
}

LinearOp star_proj(const Lattice& lat, const AbelianGroup& g, const Site& s) {
  lat.star_edges(s.vertex);
  return gauge_proj(lat, g, s.vertex);
}

LinearOp plaq_proj(const Lattice& lat, const AbelianGroup& g, const Site& s) {
  return plaq_op(lat, g, s, g.identity());
}

LinearOp charge_projector(const Lattice& lat, const AbelianGroup& g, const Site& s, int xi, int d) {
  const LinearOp b = plaq_op(lat, g, s, d);
  LinearOp out(g);
  for (int k = 0; k < g.order(); ++k) {
    out += std::conj(g.char_eval(xi, k)) * (star_op(lat, g, s, k) * b);
  }
  return (1.0 / g.order()) * out;
}

LinearOp loop_charge_projector(const AbelianGroup& g, const Ribbon& loop, int sigma, int c) {
  if (!loop.closed()) throw GeometryError("loop charge projector needs a closed ribbon");
  LinearOp out(g);
  for (int k = 0; k < g.order(); ++k) {
    out += std::conj(g.char_eval(sigma, k)) * ribbon_F(g, loop, k, c);
  }
  return (1.0 / g.order()) * out;
}

namespace {

template <class F>
void for_each_term(const Lattice& lat, const Region& region, F&& f) {
  for (int v = 0; v < lat.num_vertices(); ++v) {
    if (!lat.has_full_star(v)) continue;
    const auto edges = lat.star_edges(v);
    if (std::all_of(edges.begin(), edges.end(), [&](int e) { return region.contains(e); })) {
      f(true, Site{v, -1});
    }
  }
  for (int fc = 0; fc < lat.num_faces(); ++fc) {
    const auto edges = lat.plaq_edges(fc);
    if (std::all_of(edges.begin(), edges.end(), [&](const SignedEdge& se) { return region.contains(se.edge); })) {
      f(false, Site{lat.corners(fc)[0], fc});
    }
  }
}

}  // namespace

int hamiltonian_term_count(const Lattice& lat, const Region& region) {
  int n = 0;
  for_each_term(lat, region, [&](bool, const Site&) { ++n; });
  return n;
}

LinearOp hamiltonian(const Lattice& lat, const AbelianGroup& g, const Region& region) {
  LinearOp h(g);
  int n = 0;
  for_each_term(lat, region, [&](bool star, const Site& s) {
    h += star ? (-1.0) * gauge_proj(lat, g, s.vertex) : (-1.0) * plaq_proj(lat, g, s);
    ++n;
  });
  if (n == 0) throw GeometryError("region contains no complete star or plaquette");
  return h;
}

double max_difference(const LinearOp& a, const LinearOp& b, int num_edges, std::size_t cap) {
  std::set<int> s;
  for (int e : a.support()) s.insert(e);
  for (int e : b.support()) s.insert(e);
  const std::vector<int> support(s.begin(), s.end());
  const int n = a.group().order();
  std::size_t count = 1;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (count > cap / n) throw std::length_error("identity check exceeds the configuration cap");
    count *= n;
  }
  double worst = 0.0;
  Config x(num_edges, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (int e : support) {
      x[e] = static_cast<std::uint16_t>(rest % n);
      rest /= n;
    }
    const SparseState basis = SparseState::basis(x);
    worst = std::max(worst, distance(a.apply(basis), b.apply(basis)));
  }
  return worst;
}

double commutator_norm(const LinearOp& a, const LinearOp& b, int num_edges, std::size_t cap) {
  return max_difference(a * b, b * a, num_edges, cap);
}

Eigen::SparseMatrix<cplx> to_sparse_matrix(const LinearOp& op, int num_edges, std::size_t cap) {
  const int n = op.group().order();
  std::size_t dim = 1;
  for (int e = 0; e < num_edges; ++e) {
    if (dim > cap / n) throw std::length_error("matrix dimension exceeds the cap");
    dim *= n;
  }
  std::vector<Eigen::Triplet<cplx>> trips;
  for (std::size_t col = 0; col < dim; ++col) {
    const Config x = config_from_key(col, num_edges, n);
    for (const auto& a : op.terms()) {
      Config y = x;
      cplx amp = 1.0;
      if (a.apply(op.group(), y, amp)) {
        trips.emplace_back(static_cast<int>(config_key(y, n)), static_cast<int>(col), amp);
      }
    }
  }
  Eigen::SparseMatrix<cplx> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(cplx(0.0), kPruneTol);
  return m;
}

}  // namespace qd
