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

// Independent reference computations for the tests. Everything here works
// from raw coordinates and residues on cyclic factors; nothing calls the
// library's operators, states or group tables.

#ifndef QDOUBLE_TESTS_SUPPORT_ORACLES_HPP_
#define QDOUBLE_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "qdouble/lattice.hpp"

namespace qd::oracle {

using cplx = std::complex<double>;

// Z_{n1} x ... x Z_{nk}, elements as mixed-radix integers with the first
// factor most significant.
struct Cyclic {
  std::vector<int> orders;

  int order() const {
    return std::accumulate(orders.begin(), orders.end(), 1, std::multiplies<>());
  }
  std::vector<int> residues(int a) const {
    std::vector<int> r(orders.size());
    for (int i = static_cast<int>(orders.size()) - 1; i >= 0; --i) {
      r[i] = a % orders[i];
      a /= orders[i];
    }
    return r;
  }
  int pack(const std::vector<int>& r) const {
    int a = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) a = a * orders[i] + ((r[i] % orders[i]) + orders[i]) % orders[i];
    return a;
  }
  int add(int a, int b) const {
    auto x = residues(a);
    auto y = residues(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return pack(x);
  }
  int neg(int a) const {
    auto x = residues(a);
    for (auto& v : x) v = -v;
    return pack(x);
  }
  int scale(int a, int k) const {
    auto x = residues(a);
    for (auto& v : x) v *= k;
    return pack(x);
  }
  cplx chi(int c, int a) const {
    const auto x = residues(c);
    const auto y = residues(a);
    double t = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) t += static_cast<double>(x[i] * y[i]) / orders[i];
    return std::polar(1.0, 2.0 * M_PI * t);
  }
};

// Configurations as integers, edge 0 most significant.
inline std::vector<int> decode(std::uint64_t key, int num_edges, int order) {
  std::vector<int> x(num_edges);
  for (int e = num_edges - 1; e >= 0; --e) {
    x[e] = static_cast<int>(key % order);
    key /= order;
  }
  return x;
}

inline std::uint64_t encode(const std::vector<int>& x, int order) {
  std::uint64_t key = 0;
  for (int v : x) key = key * order + v;
  return key;
}

inline std::uint64_t config_count(int num_edges, int order) {
  std::uint64_t n = 1;
  for (int e = 0; e < num_edges; ++e) n *= order;
  return n;
}

// Horizontal edge (x,y)->(x+1,y) and vertical edge (x,y)->(x,y+1), located
// by their endpoint coordinates rather than by the lattice's edge ids.
inline int find_edge(const Lattice& lat, int x0, int y0, int x1, int y1) {
  const int a = lat.vertex(x0, y0);
  const int b = lat.vertex(x1, y1);
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (lat.tail(e) == a && lat.head(e) == b) {
      // On a 2-wide torus two edges join the same vertices; pick by axis.
      if ((x0 != x1) == lat.horizontal(e)) return e;
    }
  }
  return -1;
}

// Anticlockwise flux around face (x,y): bottom + right - top - left.
inline int flux(const Lattice& lat, const Cyclic& g, int fx, int fy, const std::vector<int>& x) {
  const int bottom = find_edge(lat, fx, fy, fx + 1, fy);
  const int right = find_edge(lat, fx + 1, fy, fx + 1, fy + 1);
  const int top = find_edge(lat, fx, fy + 1, fx + 1, fy + 1);
  const int left = find_edge(lat, fx, fy, fx, fy + 1);
  int f = g.add(x[bottom], x[right]);
  f = g.add(f, g.neg(x[top]));
  return g.add(f, g.neg(x[left]));
}

inline std::vector<std::array<int, 2>> face_coords(const Lattice& lat) {
  std::vector<std::array<int, 2>> out;
  const int fw = lat.torus() ? lat.width() : lat.width() - 1;
  const int fh = lat.torus() ? lat.height() : lat.height() - 1;
  for (int y = 0; y < fh; ++y) {
    for (int x = 0; x < fw; ++x) out.push_back({x, y});
  }
  return out;
}

inline bool flat(const Lattice& lat, const Cyclic& g, const std::vector<int>& x) {
  for (const auto& [fx, fy] : face_coords(lat)) {
    if (flux(lat, g, fx, fy, x) != 0) return false;
  }
  return true;
}

// Brute-force count of flat connections.
inline std::uint64_t count_flat(const Lattice& lat, const Cyclic& g) {
  std::uint64_t n = 0;
  const std::uint64_t total = config_count(lat.num_edges(), g.order());
  for (std::uint64_t k = 0; k < total; ++k) n += flat(lat, g, decode(k, lat.num_edges(), g.order()));
  return n;
}

// Edges at vertex (x,y) with +1 for edges leaving it.
inline std::vector<std::pair<int, int>> star(const Lattice& lat, int vx, int vy) {
  std::vector<std::pair<int, int>> out;
  const int v = lat.vertex(vx, vy);
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (lat.tail(e) == v) out.push_back({e, 1});
    if (lat.head(e) == v) out.push_back({e, -1});
  }
  return out;
}

// Sparse symmetric matrix as an adjacency map, for block decomposition.
using SparseRows = std::vector<std::map<std::uint64_t, double>>;

// H = -sum_v A_v - sum_f B_f over complete stars and plaquettes, with
// A_v = |G|^-1 sum_k (gauge shift by k at v) and B_f = [flux(f) == 0].
inline SparseRows hamiltonian(const Lattice& lat, const Cyclic& g) {
  const int n = g.order();
  const std::uint64_t total = config_count(lat.num_edges(), n);
  SparseRows h(total);
  std::vector<std::array<int, 2>> verts;
  for (int y = 0; y < lat.height(); ++y) {
    for (int x = 0; x < lat.width(); ++x) {
      if (star(lat, x, y).size() == 4) verts.push_back({x, y});
    }
  }
  const auto faces = face_coords(lat);
  for (std::uint64_t k = 0; k < total; ++k) {
    const auto x = decode(k, lat.num_edges(), n);
    for (const auto& [fx, fy] : faces) {
      if (flux(lat, g, fx, fy, x) == 0) h[k][k] -= 1.0;
    }
    for (const auto& [vx, vy] : verts) {
      for (int a = 0; a < n; ++a) {
        auto y = x;
        for (const auto& [e, s] : star(lat, vx, vy)) y[e] = g.add(y[e], g.scale(a, s));
        h[encode(y, n)][k] -= 1.0 / n;
      }
    }
  }
  return h;
}

struct Spectrum {
  double ground_energy = 0.0;
  int degeneracy = 0;
  std::vector<double> eigenvalues;  // all of them, sorted
};

// Exact diagonalization of a real symmetric matrix, block by block over the
// connected components of its nonzero pattern.
inline Spectrum diagonalize(const SparseRows& h, double degeneracy_tol = 1e-9) {
  const std::size_t n = h.size();
  std::vector<int> comp(n, -1);
  Spectrum out;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    std::vector<std::uint64_t> block{start};
    comp[start] = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (const auto& [j, v] : h[block[i]]) {
        if (v != 0.0 && comp[j] < 0) {
          comp[j] = 0;
          block.push_back(j);
        }
      }
    }
    std::sort(block.begin(), block.end());
    std::map<std::uint64_t, int> local;
    for (std::size_t i = 0; i < block.size(); ++i) local[block[i]] = static_cast<int>(i);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(block.size(), block.size());
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (const auto& [j, v] : h[block[i]]) m(static_cast<int>(i), local.at(j)) += v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.ground_energy = out.eigenvalues.front();
  for (double e : out.eigenvalues) out.degeneracy += std::abs(e - out.ground_energy) < degeneracy_tol;
  return out;
}

// Rank of a set of complex vectors given as key -> amplitude maps, by
// column-pivoted QR. real_rank splits each vector into its real and
// imaginary parts and counts dimension over the reals.
inline int rank(const std::vector<std::map<std::uint64_t, cplx>>& vectors, bool real_rank, double tol = 1e-8) {
  std::map<std::uint64_t, int> rows;
  for (const auto& v : vectors) {
    for (const auto& [k, a] : v) rows.emplace(k, 0);
  }
  int r = 0;
  for (auto& [k, i] : rows) i = r++;
  if (vectors.empty() || rows.empty()) return 0;
  if (real_rank) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * r, static_cast<int>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      for (const auto& [k, a] : vectors[j]) {
        m(rows[k], static_cast<int>(j)) = a.real();
        m(r + rows[k], static_cast<int>(j)) = a.imag();
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(tol);
    return static_cast<int>(qr.rank());
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, static_cast<int>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    for (const auto& [k, a] : vectors[j]) m(rows[k], static_cast<int>(j)) = a;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

// Schmidt rank of the uniform flat-connection state across the cut between
// `region` and the rest, from brute-force enumeration.
inline int schmidt_rank(const Lattice& lat, const Cyclic& c, const Region& region) {
  std::vector<int> in;
  std::vector<int> out;
  const auto inside = region.edges();
  for (int e = 0; e < lat.num_edges(); ++e) {
    (std::find(inside.begin(), inside.end(), e) != inside.end() ? in : out).push_back(e);
  }
  const int n = c.order();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(config_count(static_cast<int>(in.size()), n),
                                             config_count(static_cast<int>(out.size()), n));
  for (std::uint64_t k = 0; k < config_count(lat.num_edges(), n); ++k) {
    const auto x = decode(k, lat.num_edges(), n);
    if (!flat(lat, c, x)) continue;
    std::vector<int> a;
    std::vector<int> b;
    for (int e : in) a.push_back(x[e]);
    for (int e : out) b.push_back(x[e]);
    m(encode(a, n), encode(b, n)) = 1.0;
  }
  return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

}  // namespace qd::oracle

#endif  // QDOUBLE_TESTS_SUPPORT_ORACLES_HPP_
