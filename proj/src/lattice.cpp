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

#include "qdouble/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace qd {

namespace {

// Corner at the tail of each face side (bottom, right, top, left).
constexpr int kSideTailCorner[4] = {0, 1, 3, 0};

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

Lattice::Lattice(int width, int height, Boundary boundary) : w_(width), h_(height), boundary_(boundary) {
  if (w_ < 2 || h_ < 2) throw GeometryError("lattice dimensions must be >= 2");
  const int nv = w_ * h_;
  hedge_.assign(nv, -1);
  vedge_.assign(nv, -1);
  for (int y = 0; y < h_; ++y) {
    for (int x = 0; x < w_; ++x) {
      if (torus() || x + 1 < w_) hedge_[y * w_ + x] = add_edge(vertex(x, y), vertex(x + 1, y), true);
    }
  }
  for (int y = 0; y < h_; ++y) {
    for (int x = 0; x < w_; ++x) {
      if (torus() || y + 1 < h_) vedge_[y * w_ + x] = add_edge(vertex(x, y), vertex(x, y + 1), false);
    }
  }
  face_id_.assign(nv, -1);
  const int fw = torus() ? w_ : w_ - 1;
  const int fh = torus() ? h_ : h_ - 1;
  for (int y = 0; y < fh; ++y) {
    for (int x = 0; x < fw; ++x) {
      face_id_[y * w_ + x] = static_cast<int>(face_xy_.size());
      face_xy_.push_back({x, y});
      corners_.push_back({vertex(x, y), vertex(x + 1, y), vertex(x + 1, y + 1), vertex(x, y + 1)});
      sides_.push_back({hedge(x, y), vedge(x + 1, y), hedge(x, y + 1), vedge(x, y)});
    }
  }
  const int ne = num_edges();
  left_.assign(ne, -1);
  right_.assign(ne, -1);
  for (int e = 0; e < ne; ++e) {
    const auto [x, y] = vertex_xy(tail_[e]);
    if (horizontal_[e]) {
      left_[e] = face(x, y);
      right_[e] = face(x, y - 1);
    } else {
      left_[e] = face(x - 1, y);
      right_[e] = face(x, y);
    }
  }
  quadrant_.resize(nv);
  star_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const auto [x, y] = vertex_xy(v);
    quadrant_[v] = {face(x, y), face(x - 1, y), face(x - 1, y - 1), face(x, y - 1)};
    star_[v] = {hedge(x, y), vedge(x, y), hedge(x - 1, y), vedge(x, y - 1)};
  }
}

int Lattice::add_edge(int t, int h, bool horizontal) {
  tail_.push_back(t);
  head_.push_back(h);
  horizontal_.push_back(horizontal);
  return static_cast<int>(tail_.size()) - 1;
}

std::string Lattice::name() const {
  return std::to_string(w_) + "x" + std::to_string(h_) + (torus() ? ":torus" : ":plane");
}

int Lattice::vertex(int x, int y) const {
  if (torus()) return mod(y, h_) * w_ + mod(x, w_);
  if (x < 0 || y < 0 || x >= w_ || y >= h_) return -1;
  return y * w_ + x;
}

int Lattice::face(int x, int y) const {
  if (torus()) return face_id_[mod(y, h_) * w_ + mod(x, w_)];
  if (x < 0 || y < 0 || x >= w_ - 1 || y >= h_ - 1) return -1;
  return face_id_[y * w_ + x];
}

int Lattice::hedge(int x, int y) const {
  const int v = vertex(x, y);
  return v < 0 ? -1 : hedge_[v];
}

int Lattice::vedge(int x, int y) const {
  const int v = vertex(x, y);
  return v < 0 ? -1 : vedge_[v];
}

int Lattice::corner_index(int f, int v) const {
  for (int c = 0; c < 4; ++c) {
    if (corners_[f][c] == v) return c;
  }
  return -1;
}

int Lattice::quadrant_of(int v, int f) const {
  if (f < 0) return -1;
  for (int q = 0; q < 4; ++q) {
    if (quadrant_[v][q] == f) return q;
  }
  return -1;
}

int Lattice::quadrant_boundary_edge(int v, int q) const { return star_[v][(q + 1) % 4]; }

bool Lattice::has_full_star(int v) const {
  return std::all_of(star_[v].begin(), star_[v].end(), [](int e) { return e >= 0; });
}

std::vector<int> Lattice::incident_edges(int v) const {
  std::vector<int> out;
  for (int e : star_[v]) {
    if (e >= 0) out.push_back(e);
  }
  return out;
}

std::vector<int> Lattice::star_edges(int v) const {
  if (!has_full_star(v)) throw NotInterior("star of vertex " + std::to_string(v) + " is truncated by the patch");
  return incident_edges(v);
}

std::vector<SignedEdge> Lattice::plaq_edges(const Site& s) const {
  const int c0 = corner_index(s.face, s.vertex);
  if (c0 < 0) throw GeometryError("site vertex is not a corner of its face");
  std::vector<SignedEdge> out;
  for (int i = 0; i < 4; ++i) {
    const int side = (c0 + i) % 4;
    out.push_back({sides_[s.face][side], kSideTailCorner[side] == side ? 1 : -1});
  }
  return out;
}

std::vector<SignedEdge> Lattice::plaq_edges(int f) const { return plaq_edges(Site{corners_[f][0], f}); }

std::vector<SignedEdge> Lattice::gauge_edges(int v) const {
  std::vector<SignedEdge> out;
  for (int d = 0; d < 4; ++d) {
    const int e = star_[v][d];
    if (e >= 0) out.push_back({e, d < 2 ? 1 : -1});
  }
  return out;
}

bool Lattice::valid_site(const Site& s) const {
  if (s.vertex < 0 || s.vertex >= num_vertices() || s.face < 0 || s.face >= num_faces()) return false;
  return quadrant_of(s.vertex, s.face) >= 0;
}

std::vector<Site> Lattice::sites() const {
  std::vector<Site> out;
  for (int v = 0; v < num_vertices(); ++v) {
    for (int q = 0; q < 4; ++q) {
      if (quadrant_[v][q] >= 0) out.push_back({v, quadrant_[v][q]});
    }
  }
  return out;
}

Triangle Lattice::direct_triangle(const Site& from, const Site& to) const {
  if (!valid_site(from) || !valid_site(to) || from.face != to.face) {
    throw GeometryError("direct triangle needs two sites on one face");
  }
  const int c1 = corner_index(from.face, from.vertex);
  const int c2 = corner_index(to.face, to.vertex);
  Triangle t;
  t.kind = TriangleKind::kDirect;
  t.from = from;
  t.to = to;
  int side;
  if (c2 == mod(c1 - 1, 4)) {
    t.hand = Handedness::kStandard;
    side = c2;
  } else if (c2 == mod(c1 + 1, 4)) {
    t.hand = Handedness::kMirrored;
    side = c1;
  } else {
    throw GeometryError("direct triangle corners are not adjacent");
  }
  t.edge = sides_[from.face][side];
  t.parallel = kSideTailCorner[side] == c1;
  return t;
}

Triangle Lattice::dual_triangle(const Site& from, const Site& to) const {
  if (!valid_site(from) || !valid_site(to) || from.vertex != to.vertex) {
    throw GeometryError("dual triangle needs two sites on one vertex");
  }
  const int q1 = quadrant_of(from.vertex, from.face);
  const int q2 = quadrant_of(to.vertex, to.face);
  Triangle t;
  t.kind = TriangleKind::kDual;
  t.from = from;
  t.to = to;
  int q;
  if (q2 == mod(q1 + 1, 4)) {
    t.hand = Handedness::kStandard;
    q = q1;
  } else if (q2 == mod(q1 - 1, 4)) {
    t.hand = Handedness::kMirrored;
    q = q2;
  } else {
    throw GeometryError("dual triangle faces are not adjacent around the vertex");
  }
  t.edge = quadrant_boundary_edge(from.vertex, q);
  if (t.edge < 0) throw GeometryError("dual triangle crosses a missing edge");
  t.parallel = right_face(t.edge) == from.face;
  return t;
}

std::vector<Triangle> Lattice::standard_steps(const Site& s) const {
  std::vector<Triangle> out;
  const int c = corner_index(s.face, s.vertex);
  out.push_back(direct_triangle(s, Site{corners_[s.face][mod(c - 1, 4)], s.face}));
  const int q = quadrant_of(s.vertex, s.face);
  const int f2 = quadrant_[s.vertex][(q + 1) % 4];
  if (f2 >= 0 && quadrant_boundary_edge(s.vertex, q) >= 0) out.push_back(dual_triangle(s, Site{s.vertex, f2}));
  std::sort(out.begin(), out.end(), [](const Triangle& a, const Triangle& b) { return a.edge < b.edge; });
  return out;
}

Ribbon::Ribbon(std::vector<Triangle> triangles) : tri_(std::move(triangles)) {
  std::set<int> used;
  for (std::size_t i = 0; i < tri_.size(); ++i) {
    if (!used.insert(tri_[i].edge).second) throw GeometryError("ribbon triangles overlap on an edge");
    if (i > 0 && !(tri_[i - 1].to == tri_[i].from)) throw GeometryError("ribbon triangles do not match up");
    if (tri_[i].hand != tri_[0].hand) throw GeometryError("ribbon mixes handedness");
  }
  if (!tri_.empty()) anchor_ = tri_.front().from;
}

std::optional<Site> Ribbon::start() const { return tri_.empty() ? anchor_ : tri_.front().from; }
std::optional<Site> Ribbon::end() const { return tri_.empty() ? anchor_ : tri_.back().to; }

bool Ribbon::closed() const { return !tri_.empty() && tri_.front().from == tri_.back().to; }

std::vector<int> Ribbon::edges() const {
  std::vector<int> out;
  for (const auto& t : tri_) out.push_back(t.edge);
  return out;
}

std::vector<SignedEdge> Ribbon::direct_path() const {
  std::vector<SignedEdge> out;
  for (const auto& t : tri_) {
    if (t.kind == TriangleKind::kDirect) out.push_back({t.edge, t.parallel ? 1 : -1});
  }
  return out;
}

std::vector<SignedEdge> Ribbon::dual_path() const {
  std::vector<SignedEdge> out;
  for (const auto& t : tri_) {
    if (t.kind == TriangleKind::kDual) out.push_back({t.edge, t.parallel ? 1 : -1});
  }
  return out;
}

Ribbon Ribbon::prefix(std::size_t n) const {
  if (n == 0) return start() ? Ribbon(*start()) : Ribbon();
  return Ribbon(std::vector<Triangle>(tri_.begin(), tri_.begin() + std::min(n, tri_.size())));
}

Ribbon Ribbon::suffix(std::size_t n) const {
  if (n >= tri_.size()) return end() ? Ribbon(*end()) : Ribbon();
  return Ribbon(std::vector<Triangle>(tri_.begin() + n, tri_.end()));
}

Ribbon ribbon_concat(const Ribbon& a, const Ribbon& b) {
  if (a.trivial() && !a.start()) return b;
  if (b.trivial() && !b.start()) return a;
  if (!(*a.end() == *b.start())) throw GeometryError("ribbon endpoints do not match");
  if (a.trivial()) return b;
  if (b.trivial()) return a;
  std::vector<Triangle> t = a.triangles();
  t.insert(t.end(), b.triangles().begin(), b.triangles().end());
  return Ribbon(std::move(t));
}

Ribbon ribbon_invert(const Ribbon& r) {
  if (r.trivial()) return r;
  std::vector<Triangle> out;
  for (auto it = r.triangles().rbegin(); it != r.triangles().rend(); ++it) {
    Triangle t = *it;
    std::swap(t.from, t.to);
    t.parallel = !t.parallel;
    t.hand = t.hand == Handedness::kStandard ? Handedness::kMirrored : Handedness::kStandard;
    out.push_back(t);
  }
  return Ribbon(std::move(out));
}

bool ribbons_overlap(const Ribbon& a, const Ribbon& b) {
  std::set<int> ea;
  for (int e : a.edges()) ea.insert(e);
  for (int e : b.edges()) {
    if (ea.count(e)) return true;
  }
  return false;
}

Region::Region(const Lattice& lat, std::vector<int> edges) : in_(lat.num_edges(), false) {
  for (int e : edges) {
    if (e < 0 || e >= lat.num_edges()) throw GeometryError("edge id out of range");
    in_[e] = true;
  }
}

Region Region::all(const Lattice& lat) {
  Region r;
  r.in_.assign(lat.num_edges(), true);
  return r;
}

Region Region::none(const Lattice& lat) {
  Region r;
  r.in_.assign(lat.num_edges(), false);
  return r;
}

std::vector<int> Region::edges() const {
  std::vector<int> out;
  for (int e = 0; e < num_edges(); ++e) {
    if (in_[e]) out.push_back(e);
  }
  return out;
}

std::size_t Region::size() const { return static_cast<std::size_t>(std::count(in_.begin(), in_.end(), true)); }

Region Region::complement() const {
  Region r = *this;
  r.in_.flip();
  return r;
}

bool Region::contains(const Ribbon& r) const {
  for (int e : r.edges()) {
    if (!in_[e]) return false;
  }
  return true;
}

Region interior_complement(const Lattice& lat, const Region& lambda) {
  std::vector<bool> touched(lat.num_vertices(), false);
  for (int e : lambda.edges()) {
    touched[lat.tail(e)] = true;
    touched[lat.head(e)] = true;
  }
  std::vector<int> out;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (!lambda.contains(e) && !touched[lat.tail(e)] && !touched[lat.head(e)]) out.push_back(e);
  }
  return Region(lat, out);
}

Region boundary(const Lattice& lat, const Region& lambda) {
  const Region inner = interior_complement(lat, lambda);
  std::vector<int> out;
  for (int e = 0; e < lat.num_edges(); ++e) {
    if (!lambda.contains(e) && !inner.contains(e)) out.push_back(e);
  }
  return Region(lat, out);
}

bool site_in(const Lattice& lat, const Region& lambda, const Site& s) {
  for (int e : lat.incident_edges(s.vertex)) {
    if (!lambda.contains(e)) return false;
  }
  return true;
}

bool site_on_boundary(const Lattice& lat, const Region& lambda, const Site& s) {
  if (site_in(lat, lambda, s)) return false;
  bool inside = false;
  bool outside = false;
  auto visit = [&](int e) {
    if (lambda.contains(e)) {
      inside = true;
    } else {
      outside = true;
    }
  };
  for (int e : lat.incident_edges(s.vertex)) visit(e);
  for (const auto& se : lat.plaq_edges(s.face)) visit(se.edge);
  return inside && outside;
}

Dir parse_dir(std::string_view s) {
  if (s == "E" || s == "e") return Dir::kEast;
  if (s == "N" || s == "n") return Dir::kNorth;
  if (s == "W" || s == "w") return Dir::kWest;
  if (s == "S" || s == "s") return Dir::kSouth;
  throw GeometryError("unknown direction '" + std::string(s) + "'");
}

Region cone_make(const Lattice& lat, int ax, int ay, Dir a, Dir b, ConeStyle style) {
  const bool a_horizontal = a == Dir::kEast || a == Dir::kWest;
  const bool b_horizontal = b == Dir::kEast || b == Dir::kWest;
  if (a_horizontal == b_horizontal) throw GeometryError("cone directions must be orthogonal");
  const Dir hd = a_horizontal ? a : b;
  const Dir vd = a_horizontal ? b : a;
  if (ax <= 0 || ay <= 0 || ax >= lat.width() - 1 || ay >= lat.height() - 1) {
    throw GeometryError("cone apex must be interior to the patch");
  }
  auto in_quadrant = [&](int v) {
    const auto [x, y] = lat.vertex_xy(v);
    const bool okx = hd == Dir::kEast ? x >= ax : x <= ax;
    const bool oky = vd == Dir::kNorth ? y >= ay : y <= ay;
    return okx && oky;
  };
  auto on_ray = [&](int v) {
    const auto [x, y] = lat.vertex_xy(v);
    return in_quadrant(v) && (x == ax || y == ay);
  };
  std::vector<int> edges;
  for (int e = 0; e < lat.num_edges(); ++e) {
    const int t = lat.tail(e);
    const int h = lat.head(e);
    // Skip wrap-around edges on a torus; the cone lives in one chart.
    const auto [tx, ty] = lat.vertex_xy(t);
    const auto [hx, hy] = lat.vertex_xy(h);
    if (std::abs(tx - hx) > 1 || std::abs(ty - hy) > 1) continue;
    const bool both = in_quadrant(t) && in_quadrant(h);
    const bool touching = style == ConeStyle::kTouchingRays && (on_ray(t) || on_ray(h));
    if (both || touching) edges.push_back(e);
  }
  return Region(lat, edges);
}

Ribbon ribbon_between(const Lattice& lat, const Site& s0, const Site& s1, const Region& region) {
  if (!lat.valid_site(s0) || !lat.valid_site(s1)) throw GeometryError("invalid site");
  if (s0 == s1) return Ribbon(s0);
  std::map<Site, Triangle> parent;
  std::set<Site> seen{s0};
  std::deque<Site> queue{s0};
  bool found = false;
  while (!queue.empty() && !found) {
    const Site s = queue.front();
    queue.pop_front();
    for (const Triangle& t : lat.standard_steps(s)) {
      if (!region.contains(t.edge) || seen.count(t.to)) continue;
      seen.insert(t.to);
      parent[t.to] = t;
      if (t.to == s1) {
        found = true;
        break;
      }
      queue.push_back(t.to);
    }
  }
  if (!found) throw Unreachable("no ribbon inside the region connects the sites");
  std::vector<Triangle> path;
  for (Site s = s1; !(s == s0); s = parent[s].from) path.push_back(parent[s]);
  std::reverse(path.begin(), path.end());
  std::set<int> used;
  bool overlap = false;
  for (const auto& t : path) overlap |= !used.insert(t.edge).second;
  if (!overlap) return Ribbon(std::move(path));

  // The site-level shortest path reuses an edge; search with edge bookkeeping.
  const std::size_t base = path.size();
  std::vector<Triangle> stack;
  std::set<int> in_use;
  std::function<bool(const Site&, std::size_t)> dfs = [&](const Site& s, std::size_t budget) -> bool {
    if (s == s1) return true;
    if (budget == 0) return false;
    for (const Triangle& t : lat.standard_steps(s)) {
      if (!region.contains(t.edge) || in_use.count(t.edge)) continue;
      in_use.insert(t.edge);
      stack.push_back(t);
      if (dfs(t.to, budget - 1)) return true;
      stack.pop_back();
      in_use.erase(t.edge);
    }
    return false;
  };
  for (std::size_t limit = base; limit <= base + 16; ++limit) {
    stack.clear();
    in_use.clear();
    if (dfs(s0, limit)) return Ribbon(stack);
  }
  throw Unreachable("no non-overlapping ribbon found within the search bound");
}

namespace {

int quadrant_out(Dir d) {
  switch (d) {
    case Dir::kEast: return 3;
    case Dir::kNorth: return 0;
    case Dir::kWest: return 1;
    case Dir::kSouth: return 2;
  }
  return 0;
}

Dir step_dir(char c) {
  switch (c) {
    case 'E': case 'e': return Dir::kEast;
    case 'N': case 'n': return Dir::kNorth;
    case 'W': case 'w': return Dir::kWest;
    case 'S': case 's': return Dir::kSouth;
    default: throw GeometryError(std::string("bad walk step '") + c + "'");
  }
}

void rotate_to(const Lattice& lat, Site& s, int target_q, std::vector<Triangle>& out) {
  int q = lat.quadrant_of(s.vertex, s.face);
  for (int guard = 0; q != target_q; ++guard) {
    if (guard >= 4) throw GeometryError("cannot rotate to the requested quadrant");
    const int f2 = lat.quadrant_face(s.vertex, (q + 1) % 4);
    if (f2 < 0) throw GeometryError("walk leaves the patch");
    const Site next{s.vertex, f2};
    out.push_back(lat.dual_triangle(s, next));
    s = next;
    q = (q + 1) % 4;
  }
}

}  // namespace

Ribbon ribbon_walk(const Lattice& lat, const Site& start, std::string_view steps, std::optional<int> end_quadrant) {
  if (!lat.valid_site(start)) throw GeometryError("invalid start site");
  std::vector<Triangle> out;
  Site s = start;
  for (char c : steps) {
    const Dir d = step_dir(c);
    rotate_to(lat, s, quadrant_out(d), out);
    const int e = lat.star_edge(s.vertex, d);
    if (e < 0) throw GeometryError("walk leaves the patch");
    const int v2 = lat.tail(e) == s.vertex ? lat.head(e) : lat.tail(e);
    const Site next{v2, s.face};
    out.push_back(lat.direct_triangle(s, next));
    s = next;
  }
  if (end_quadrant) rotate_to(lat, s, *end_quadrant, out);
  if (out.empty()) return Ribbon(start);
  return Ribbon(std::move(out));
}

Ribbon alpha_ribbon(const Lattice& lat, const Site& s) {
  if (!lat.has_full_star(s.vertex)) throw NotInterior("alpha ribbon needs a complete star");
  std::vector<Triangle> out;
  Site cur = s;
  const int q0 = lat.quadrant_of(s.vertex, s.face);
  for (int i = 1; i <= 4; ++i) {
    const Site next{s.vertex, lat.quadrant_face(s.vertex, (q0 + i) % 4)};
    if (next.face < 0) throw NotInterior("alpha ribbon needs all four faces");
    out.push_back(lat.dual_triangle(cur, next));
    cur = next;
  }
  return Ribbon(std::move(out));
}

Ribbon beta_ribbon(const Lattice& lat, const Site& s) {
  std::vector<Triangle> out;
  Site cur = s;
  const int c0 = lat.corner_index(s.face, s.vertex);
  for (int i = 1; i <= 4; ++i) {
    const Site next{lat.corners(s.face)[mod(c0 - i, 4)], s.face};
    out.push_back(lat.direct_triangle(cur, next));
    cur = next;
  }
  return Ribbon(std::move(out));
}

Ribbon closed_loop_around(const Lattice& lat, const Site& target, int radius) {
  if (radius < 1) throw GeometryError("loop radius must be >= 1");
  const auto [x0, y0] = lat.vertex_xy(target.vertex);
  if (lat.torus()) {
    if (lat.width() < 2 * radius + 2 || lat.height() < 2 * radius + 2) {
      throw GeometryError("loop does not fit on the torus");
    }
  } else if (x0 - radius - 1 < 0 || y0 - radius - 1 < 0 || x0 + radius + 1 > lat.width() - 1 ||
             y0 + radius + 1 > lat.height() - 1) {
    throw GeometryError("loop does not fit on the patch");
  }
  const int v = lat.vertex(x0 - radius, y0 - radius);
  const Site start{v, lat.quadrant_face(v, 1)};
  std::string steps;
  for (char c : std::string("ENWS")) steps += std::string(2 * radius, c);
  return ribbon_walk(lat, start, steps, 1);
}

bool loop_encloses(const Lattice& lat, const Site& target, int radius, const Site& s) {
  const auto [x0, y0] = lat.vertex_xy(target.vertex);
  const auto [vx, vy] = lat.vertex_xy(s.vertex);
  const auto [fx, fy] = lat.face_xy(s.face);
  auto offset = [&](int a, int a0, int n) { return lat.torus() ? mod(a - a0 + radius, n) : a - a0 + radius; };
  const int dvx = offset(vx, x0, lat.width());
  const int dvy = offset(vy, y0, lat.height());
  const int dfx = offset(fx, x0, lat.width());
  const int dfy = offset(fy, y0, lat.height());
  const bool vertex_in = dvx >= 0 && dvx <= 2 * radius && dvy >= 0 && dvy <= 2 * radius;
  const bool face_in = dfx >= 0 && dfx < 2 * radius && dfy >= 0 && dfy < 2 * radius;
  return vertex_in && face_in;
}

}  // namespace qd

namespace qd {

std::vector<Ribbon> enumerate_ribbons(const Lattice& lat, const Region& region, int max_len) {
  std::vector<Ribbon> out;
  std::vector<Triangle> stack;
  std::set<int> used;
  auto rec = [&](auto&& self, const Site& s) -> void {
    if (!stack.empty()) out.emplace_back(stack);
    if (static_cast<int>(stack.size()) == max_len) return;
    for (const Triangle& t : lat.standard_steps(s)) {
      if (!region.contains(t.edge) || used.count(t.edge)) continue;
      used.insert(t.edge);
      stack.push_back(t);
      self(self, t.to);
      stack.pop_back();
      used.erase(t.edge);
    }
  };
  for (const Site& s : lat.sites()) rec(rec, s);
  return out;
}

ConeAudit audit_cone(const Lattice& lat, const Region& region, bool full_stars_only) {
  ConeAudit audit;
  const Region outside = region.complement();
  std::vector<Site> in, bd;
  for (const Site& s : lat.sites()) {
    if (full_stars_only && !lat.has_full_star(s.vertex)) continue;
    if (site_in(lat, region, s)) in.push_back(s);
    if (site_on_boundary(lat, region, s)) bd.push_back(s);
  }
  audit.inside_sites = static_cast<int>(in.size());
  audit.boundary_sites = static_cast<int>(bd.size());
  auto connected = [&](const Site& a, const Site& b, const Region& r) {
    try {
      ribbon_between(lat, a, b, r);
      return true;
    } catch (const Unreachable&) {
      return false;
    }
  };
  for (const Site& a : in) {
    for (const Site& b : in) audit.inside_failures += connected(a, b, region) ? 0 : 1;
  }
  // Standard triangles leaving / entering each site, split by region.
  std::map<Site, std::vector<Triangle>> out_leaving, out_arriving;
  std::set<Site> in_leaving, in_arriving;
  for (const Site& s : lat.sites()) {
    for (const Triangle& t : lat.standard_steps(s)) {
      if (outside.contains(t.edge)) {
        out_leaving[s].push_back(t);
        out_arriving[t.to].push_back(t);
      } else {
        in_leaving.insert(s);
        in_arriving.insert(t.to);
      }
    }
  }
  for (const Site& a : bd) {
    std::vector<std::optional<Triangle>> heads{std::nullopt};
    for (const Triangle& t : out_leaving[a]) heads.emplace_back(t);
    bool head_live = false;
    for (const auto& h : heads) head_live = head_live || in_leaving.count(h ? h->to : a) > 0;
    for (const Site& b : bd) {
      const bool out_ok = connected(a, b, outside);
      audit.outside_failures += out_ok ? 0 : 1;
      if (!out_leaving[a].empty() && !out_arriving[b].empty()) {
        ++audit.outside_live_pairs;
        audit.outside_live_failures += out_ok ? 0 : 1;
      }

      std::vector<std::optional<Triangle>> tails{std::nullopt};
      for (const Triangle& t : out_arriving[b]) tails.emplace_back(t);
      bool tail_live = false;
      for (const auto& t : tails) tail_live = tail_live || in_arriving.count(t ? t->from : b) > 0;
      bool ok = false;
      for (const auto& h : heads) {
        for (const auto& t : tails) {
          if (ok) break;
          if (h && t && h->edge == t->edge) continue;
          const Site from = h ? h->to : a;
          const Site to = t ? t->from : b;
          try {
            Ribbon full = ribbon_between(lat, from, to, region);
            if (h) full = ribbon_concat(Ribbon(std::vector<Triangle>{*h}), full);
            if (t) full = ribbon_concat(full, Ribbon(std::vector<Triangle>{*t}));
            ok = true;
          } catch (const GeometryError&) {
          }
        }
      }
      audit.through_failures += ok ? 0 : 1;
      if (head_live && tail_live) {
        ++audit.through_live_pairs;
        audit.through_live_failures += ok ? 0 : 1;
      }
    }
  }
  return audit;
}

}  // namespace qd
