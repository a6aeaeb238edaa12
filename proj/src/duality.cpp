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

#include "qdouble/duality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "qdouble/ground.hpp"

namespace qd {

std::vector<LinearOp> region_ribbon_ops(const Lattice& lat, const AbelianGroup& g, const Region& region, int cap) {
  std::vector<LinearOp> out;
  for (const Ribbon& r : enumerate_ribbons(lat, region, cap)) {
    for (int chi = 0; chi < g.order(); ++chi) {
      for (int c = 0; c < g.order(); ++c) {
        if (chi == 0 && c == 0) continue;
        out.push_back(ribbon_F_irrep(g, r, chi, c));
      }
    }
  }
  // Edges on the rim of a plane patch border a single face and carry no dual
  // triangle; their shifts are added by hand.
  for (int e : region.edges()) {
    if (lat.left_face(e) >= 0 && lat.right_face(e) >= 0) continue;
    for (int k = 1; k < g.order(); ++k) {
      out.emplace_back(g, BasisAction{1.0, {Atom{Atom::Kind::kShift, {{e, 1}}, k}}});
    }
  }
  return out;
}

ConeSubspace::ConeSubspace(const Lattice& lat, const AbelianGroup& g, const Region& region, int cap)
    : region_(region), cap_(cap), omega_(ground_state(lat, g)) {
  if (cap < 1) throw std::invalid_argument("ribbon length cap must be positive");
  auto shorter = region_ribbon_ops(lat, g, region, cap - 1);
  dim_prev_ = close(omega_, shorter).dim();
  generators_ = region_ribbon_ops(lat, g, region, cap);
  span_ = close(omega_, generators_);
}

SpanBuilder ConeSubspace::close(const SparseState& omega, const std::vector<LinearOp>& gens) {
  SpanBuilder span(SpanBuilder::Field::kComplex);
  std::deque<SparseState> queue;
  span.add(omega);
  queue.push_back(omega);
  while (!queue.empty()) {
    const SparseState v = std::move(queue.front());
    queue.pop_front();
    for (const LinearOp& op : gens) {
      SparseState w = op.apply(v);
      if (span.add(w)) queue.push_back(std::move(w));
    }
  }
  return span;
}

double ConeSubspace::invariance_error() const {
  double worst = 0.0;
  for (const SparseState& b : span_.basis()) {
    for (const LinearOp& op : generators_) worst = std::max(worst, span_.residual(op.apply(b)));
  }
  return worst;
}

namespace {

bool disjoint_from(const Region& lambda, const std::vector<SignedEdge>& edges) {
  return std::none_of(edges.begin(), edges.end(), [&](const SignedEdge& se) { return lambda.contains(se.edge); });
}

// Detectors that commute with the region algebra: gauge transformations at
// vertices whose edges all lie in the interior complement, and flux
// projectors on faces of those sites that avoid the region.
std::vector<LinearOp> complement_detectors(const Lattice& lat, const AbelianGroup& g, const Region& lambda) {
  const Region inner = interior_complement(lat, lambda);
  std::vector<LinearOp> out;
  std::set<int> vertices;
  for (const Site& s : lat.sites()) {
    if (!site_in(lat, inner, s)) continue;
    if (vertices.insert(s.vertex).second) {
      for (int k = 1; k < g.order(); ++k) out.push_back(gauge_op(lat, g, s.vertex, k));
    }
    if (disjoint_from(lambda, lat.plaq_edges(s))) out.push_back(plaq_proj(lat, g, s));
  }
  return out;
}

}  // namespace

ExternalChargeResult external_charge_orthogonality_check(const Lattice& lat, const AbelianGroup& g,
                                                         const ConeSubspace& cs, int samples, std::uint64_t seed,
                                                         int cap) {
  ExternalChargeResult res;
  const auto detectors = complement_detectors(lat, g, cs.region());
  const auto ribbons = enumerate_ribbons(lat, cs.region().complement(), cap);
  if (detectors.empty() || ribbons.empty() || g.order() == 1) return res;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ribbons.size() - 1);
  std::uniform_int_distribution<int> label(0, g.order() - 1);
  std::uniform_int_distribution<int> count(1, 3);
  const int max_attempts = 200 * std::max(samples, 1);
  while (res.samples < samples && res.attempts < max_attempts) {
    ++res.attempts;
    LinearOp f = LinearOp::identity(g);
    for (int k = count(rng); k > 0; --k) {
      int chi = 0;
      int c = 0;
      while (chi == 0 && c == 0) {
        chi = label(rng);
        c = label(rng);
      }
      f = ribbon_F_irrep(g, ribbons[pick(rng)], chi, c) * f;
    }
    const bool excites = std::any_of(detectors.begin(), detectors.end(), [&](const LinearOp& d) {
      return commutator_norm(f, d, lat.num_edges()) > kRankTol;
    });
    if (!excites) continue;
    ++res.samples;
    res.max_projection = std::max(res.max_projection, cs.project(f.apply(cs.omega())).norm());
  }
  return res;
}

BoundaryRibbonResult boundary_ribbon_check(const Lattice& lat, const AbelianGroup& g, const ConeSubspace& cs,
                                           int cap) {
  const Region& lambda = cs.region();
  auto touches = [&](const Site& s) {
    const auto inc = lat.incident_edges(s.vertex);
    const bool star = std::any_of(inc.begin(), inc.end(), [&](int e) { return lambda.contains(e); });
    return star && !disjoint_from(lambda, lat.plaq_edges(s));
  };
  BoundaryRibbonResult res;
  for (const Ribbon& r : enumerate_ribbons(lat, lambda.complement(), cap)) {
    if (!touches(*r.start()) || !touches(*r.end())) continue;
    ++res.ribbons;
    for (int chi = 0; chi < g.order(); ++chi) {
      for (int c = 0; c < g.order(); ++c) {
        res.max_residual = std::max(res.max_residual, cs.residual(ribbon_F_irrep(g, r, chi, c).apply(cs.omega())));
      }
    }
  }
  return res;
}

namespace {

// Product of generalized Pauli operators chi_k(x_e) then shift by g_k on
// each listed edge; labels[k] = (g, chi).
LinearOp pauli_product(const AbelianGroup& g, const std::vector<int>& edges,
                       const std::vector<std::pair<int, int>>& labels) {
  BasisAction a;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [shift, chi] = labels[k];
    if (chi != 0) a.atoms.push_back(Atom{Atom::Kind::kPhase, {{edges[k], 1}}, chi});
    if (shift != 0) a.atoms.push_back(Atom{Atom::Kind::kShift, {{edges[k], 1}}, shift});
  }
  return LinearOp(g, std::move(a));
}

// Calls f(op) for every Pauli product on `edges`, by increasing number of
// non-identity factors. Stops early when f returns false.
template <class F>
void for_each_pauli(const AbelianGroup& g, const std::vector<int>& edges, F&& f) {
  const int m = static_cast<int>(edges.size());
  const int n = g.order();
  const int nontrivial = n * n - 1;
  for (int w = 0; w <= m; ++w) {
    std::vector<int> pos(w);
    for (int i = 0; i < w; ++i) pos[i] = i;
    while (true) {
      std::vector<int> digit(w, 0);
      while (true) {
        std::vector<int> sub(w);
        std::vector<std::pair<int, int>> labels(w);
        for (int i = 0; i < w; ++i) {
          sub[i] = edges[pos[i]];
          const int code = digit[i] + 1;
          labels[i] = {code / n, code % n};
        }
        if (!f(pauli_product(g, sub, labels))) return;
        int i = 0;
        while (i < w && ++digit[i] == nontrivial) digit[i++] = 0;
        if (i == w) break;
      }
      int i = w - 1;
      while (i >= 0 && pos[i] == m - w + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
}

}  // namespace

namespace {

// Incremental real Gram-Schmidt (two passes) over dense coordinates.
class RealSpan {
 public:
  explicit RealSpan(double tol) : tol_(tol) {}
  int dim() const { return static_cast<int>(basis_.size()); }
  void add(Eigen::VectorXd v) {
    const double scale = std::max(1.0, v.norm());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis_) v -= b.dot(v) * b;
    }
    const double n = v.norm();
    if (n > tol_ * scale) basis_.push_back(v / n);
  }

 private:
  double tol_;
  std::vector<Eigen::VectorXd> basis_;
};

Eigen::VectorXd realify(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.size();
  Eigen::VectorXd v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = m.data()[i].real();
    v(n + i) = m.data()[i].imag();
  }
  return v;
}

}  // namespace

DensityResult self_adjoint_density_check(const Lattice& lat, const AbelianGroup& g, const ConeSubspace& cs) {
  DensityResult res;
  res.target = 2 * cs.dim();
  const int order = g.order();
  const std::vector<int> inside = cs.region().edges();
  const std::vector<int> outside = cs.region().complement().edges();

  // Schmidt decomposition of Omega across the cut. Rows: every
  // configuration of the region edges; columns: complement configurations
  // occurring in Omega.
  std::size_t rows = 1;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    if (rows > kMatrixCap / static_cast<std::size_t>(order)) throw std::length_error("region too large for the density check");
    rows *= order;
  }
  auto part = [](const Config& c, const std::vector<int>& edges) {
    Config out(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) out[i] = c[edges[i]];
    return out;
  };
  std::map<Config, int> col_of;
  for (const Term& t : cs.omega().terms()) col_of.emplace(part(t.config, outside), static_cast<int>(col_of.size()));
  std::vector<Config> cols(col_of.size());
  for (const auto& [c, j] : col_of) cols[j] = c;
  if (rows * cols.size() > kMatrixCap * 4) throw std::length_error("cut too large for the density check");
  auto row_key = [&](const Config& c) { return static_cast<Eigen::Index>(config_key(part(c, inside), order)); };
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size()));
  for (const Term& t : cs.omega().terms()) m(row_key(t.config), col_of[part(t.config, outside)]) += t.amp;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > kRankTol) ++r;
  res.schmidt_rank = r;
  // H_Lambda is all region states tensored with the complement Schmidt
  // vectors exactly when the dimensions agree; otherwise the frame below
  // would not represent P_Lambda and the check reports failure.
  res.frame_consistent = static_cast<std::size_t>(cs.dim()) == rows * static_cast<std::size_t>(r);
  if (!res.frame_consistent) return res;
  const Eigen::MatrixXcd us = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal();
  // Omega = sum_k s_k u_k (x) b_k with b_k = conj(V_k).
  const Eigen::MatrixXcd b = svd.matrixV().leftCols(r).conjugate();

  const cplx i1(0.0, 1.0);
  RealSpan span(kRankTol);
  // Region family: M acts on the row index of U S.
  Config scratch(lat.num_edges(), 0);
  for_each_pauli(g, inside, [&](const LinearOp& op) {
    Eigen::MatrixXcd ma = Eigen::MatrixXcd::Zero(us.rows(), r);
    const LinearOp adj = op.adjoint();
    Eigen::MatrixXcd mb = ma;
    for (std::size_t a = 0; a < rows; ++a) {
      const Config ca = config_from_key(a, static_cast<int>(inside.size()), order);
      for (std::size_t i = 0; i < inside.size(); ++i) scratch[inside[i]] = ca[i];
      for (const auto* o : {&op, &adj}) {
        Config x = scratch;
        cplx amp = 1.0;
        if (!o->terms()[0].apply(g, x, amp)) continue;
        (o == &op ? ma : mb).row(row_key(x)) += amp * us.row(static_cast<Eigen::Index>(a));
      }
    }
    span.add(realify(ma + mb));
    span.add(realify(i1 * (ma - mb)));
    return true;
  });
  res.rank_region_only = span.dim();

  // Complement family: compress Z to the Schmidt vectors, C_jk = <b_j|Z|b_k>.
  std::fill(scratch.begin(), scratch.end(), 0);
  for_each_pauli(g, outside, [&](const LinearOp& z) {
    if (span.dim() >= res.target) return false;
    ++res.complement_ops;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(r, r);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (std::size_t i = 0; i < outside.size(); ++i) scratch[outside[i]] = cols[j][i];
      cplx amp = 1.0;
      if (!z.terms()[0].apply(g, scratch, amp)) continue;
      auto it = col_of.find(part(scratch, outside));
      if (it == col_of.end()) continue;
      c += amp * b.row(it->second).adjoint() * b.row(static_cast<Eigen::Index>(j));
    }
    const Eigen::MatrixXcd y1 = c + c.adjoint();
    const Eigen::MatrixXcd y2 = i1 * (c - c.adjoint());
    // P Y Omega = sum_k s_k u_k (x) sum_j Y_jk b_j.
    span.add(realify(i1 * (us * y1.transpose())));
    span.add(realify(i1 * (us * y2.transpose())));
    return true;
  });
  res.rank = span.dim();
  return res;
}

TechLemmaResult tech_lemma_check(const Lattice& lat, const AbelianGroup& g, int n, int samples, std::uint64_t seed) {
  if (lat.torus()) throw GeometryError("tech lemma check runs on a plane patch");
  if (n < 1) throw std::invalid_argument("need at least one ribbon");
  const auto sites = lat.sites();
  const int cx = (lat.width() - 1) / 2;
  const int cy = (lat.height() - 1) / 2;
  const Site center{lat.vertex(cx, cy), lat.face(cx, cy)};
  std::vector<Site> far;
  for (const Site& s : sites) {
    const auto [x, y] = lat.vertex_xy(s.vertex);
    if (std::max(std::abs(x - cx), std::abs(y - cy)) >= 2) far.push_back(s);
  }
  const Region all = Region::all(lat);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, g.order() - 1);
  TechLemmaResult res;
  for (int t = 0; t < samples; ++t) {
    std::shuffle(far.begin(), far.end(), rng);
    std::vector<Site> ends;
    std::set<int> used_v{center.vertex}, used_f{center.face};
    for (const Site& s : far) {
      if (static_cast<int>(ends.size()) == n) break;
      if (used_v.count(s.vertex) || used_f.count(s.face)) continue;
      used_v.insert(s.vertex);
      used_f.insert(s.face);
      ends.push_back(s);
    }
    if (static_cast<int>(ends.size()) < n) throw GeometryError("patch too small for the requested ribbons");
    std::vector<std::pair<int, int>> charge(n);
    int chi_tot = 0;
    int c_tot = 0;
    for (auto& [chi, c] : charge) {
      chi = label(rng);
      c = label(rng);
      chi_tot = g.char_mul(chi_tot, chi);
      c_tot = g.mul(c_tot, c);
    }
    // Psi: one ribbon per charge out of the common site.
    LinearOp psi = LinearOp::identity(g);
    for (int i = 0; i < n; ++i) {
      psi = ribbon_F_irrep(g, ribbon_between(lat, center, ends[i], all), charge[i].first, charge[i].second) * psi;
    }
    // Phi: the fused charge to the first end, then the other charges moved
    // from there to their own ends.
    LinearOp phi = ribbon_F_irrep(g, ribbon_between(lat, center, ends[0], all), chi_tot, c_tot);
    for (int i = 1; i < n; ++i) {
      const Ribbon r = ribbon_between(lat, ends[i], ends[0], all);
      phi = ribbon_F_irrep(g, r, g.char_conj(charge[i].first), g.inv(charge[i].second)) * phi;
    }
    const cplx overlap = vacuum_expectation(lat, psi.adjoint() * phi);
    res.max_error = std::max(res.max_error, std::abs(1.0 - std::abs(overlap)));
    ++res.samples;
  }
  return res;
}

}  // namespace qd
