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

#ifndef QDOUBLE_LATTICE_HPP_
#define QDOUBLE_LATTICE_HPP_

#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qd {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Star or plaquette requested where the patch truncates it.
class NotInterior : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class Unreachable : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

enum class Boundary { kPlane, kTorus };

// Compass directions; also the order of the star edges around a vertex.
enum class Dir { kEast = 0, kNorth = 1, kWest = 2, kSouth = 3 };

struct SignedEdge {
  int edge = -1;
  int sign = 1;  // +1 or -1
  bool operator==(const SignedEdge&) const = default;
};

struct Site {
  int vertex = -1;
  int face = -1;
  auto operator<=>(const Site&) const = default;
};

enum class TriangleKind { kDirect, kDual };

// Standard triangles obey the chirality table documented in the README:
// direct triangles run clockwise around their face, dual triangles run
// counterclockwise around their vertex. Mirrored triangles do the opposite
// and only arise from formal inversion.
enum class Handedness { kStandard, kMirrored };

struct Triangle {
  TriangleKind kind = TriangleKind::kDirect;
  Site from;
  Site to;
  int edge = -1;
  bool parallel = true;
  Handedness hand = Handedness::kStandard;
  bool operator==(const Triangle&) const = default;
};

// Square lattice patch. Vertex (x, y) has id y*W + x. Horizontal edges point
// east, vertical edges point north. Face (x, y) has south-west corner (x, y).
class Lattice {
 public:
  Lattice(int width, int height, Boundary boundary);

  int width() const { return w_; }
  int height() const { return h_; }
  Boundary boundary() const { return boundary_; }
  bool torus() const { return boundary_ == Boundary::kTorus; }
  int num_vertices() const { return w_ * h_; }
  int num_edges() const { return static_cast<int>(tail_.size()); }
  int num_faces() const { return static_cast<int>(face_xy_.size()); }
  std::string name() const;

  // -1 when the coordinate falls outside a plane patch; wraps on a torus.
  int vertex(int x, int y) const;
  int face(int x, int y) const;
  int hedge(int x, int y) const;  // (x,y) -> (x+1,y)
  int vedge(int x, int y) const;  // (x,y) -> (x,y+1)
  std::array<int, 2> vertex_xy(int v) const { return {v % w_, v / w_}; }
  std::array<int, 2> face_xy(int f) const { return face_xy_[f]; }

  int tail(int e) const { return tail_[e]; }
  int head(int e) const { return head_[e]; }
  bool horizontal(int e) const { return horizontal_[e]; }
  // Faces to the left / right of an edge when looking along its arrow.
  int left_face(int e) const { return left_[e]; }
  int right_face(int e) const { return right_[e]; }

  // Corners counterclockwise from the south-west: SW, SE, NE, NW.
  const std::array<int, 4>& corners(int f) const { return corners_[f]; }
  // Sides: bottom, right, top, left; side i joins corners i and i+1.
  const std::array<int, 4>& sides(int f) const { return sides_[f]; }
  int corner_index(int f, int v) const;

  // Quadrant faces at v counterclockwise from the north-east: NE, NW, SW, SE.
  // Entries are -1 where the patch ends.
  int quadrant_face(int v, int q) const { return quadrant_[v][q]; }
  int quadrant_of(int v, int f) const;
  // Star edge of v in direction d (-1 if absent). West and south edges
  // point into v.
  int star_edge(int v, Dir d) const { return star_[v][static_cast<int>(d)]; }
  // Edge separating quadrant q from quadrant q+1 at v.
  int quadrant_boundary_edge(int v, int q) const;

  bool has_full_star(int v) const;
  std::vector<int> incident_edges(int v) const;
  std::vector<int> star_edges(int v) const;  // throws NotInterior
  // Plaquette edges anticlockwise starting at the site's vertex, with the
  // sign +1 where the edge points along the anticlockwise path.
  std::vector<SignedEdge> plaq_edges(const Site& s) const;
  std::vector<SignedEdge> plaq_edges(int f) const;
  // Star edges with sign +1 for edges leaving v; only existing edges.
  std::vector<SignedEdge> gauge_edges(int v) const;

  bool valid_site(const Site& s) const;
  std::vector<Site> sites() const;

  Triangle direct_triangle(const Site& from, const Site& to) const;
  Triangle dual_triangle(const Site& from, const Site& to) const;
  // Standard triangles leaving a site, ordered by edge id (at most two).
  std::vector<Triangle> standard_steps(const Site& s) const;

 private:
  int add_edge(int t, int h, bool horizontal);

  int w_, h_;
  Boundary boundary_;
  std::vector<int> tail_, head_, left_, right_;
  std::vector<bool> horizontal_;
  std::vector<int> hedge_, vedge_, face_id_;
  std::vector<std::array<int, 2>> face_xy_;
  std::vector<std::array<int, 4>> corners_, sides_;
  std::vector<std::array<int, 4>> quadrant_, star_;
};

class Ribbon {
 public:
  Ribbon() = default;
  // Trivial ribbon anchored at a site.
  explicit Ribbon(const Site& anchor) : anchor_(anchor) {}
  // Validates matching, non-overlap and uniform handedness.
  explicit Ribbon(std::vector<Triangle> triangles);

  const std::vector<Triangle>& triangles() const { return tri_; }
  std::size_t size() const { return tri_.size(); }
  bool trivial() const { return tri_.empty(); }
  std::optional<Site> start() const;
  std::optional<Site> end() const;
  bool closed() const;
  std::vector<int> edges() const;
  std::vector<SignedEdge> direct_path() const;  // sign +1 for parallel
  std::vector<SignedEdge> dual_path() const;
  Ribbon prefix(std::size_t n) const;
  Ribbon suffix(std::size_t n) const;  // drops the first n triangles
  bool operator==(const Ribbon&) const = default;

 private:
  std::vector<Triangle> tri_;
  std::optional<Site> anchor_;
};

Ribbon ribbon_concat(const Ribbon& a, const Ribbon& b);
Ribbon ribbon_invert(const Ribbon& r);
bool ribbons_overlap(const Ribbon& a, const Ribbon& b);

// Edge set on a lattice.
class Region {
 public:
  Region() = default;
  Region(const Lattice& lat, std::vector<int> edges);
  static Region all(const Lattice& lat);
  static Region none(const Lattice& lat);

  bool contains(int e) const { return in_[e]; }
  std::vector<int> edges() const;
  std::size_t size() const;
  int num_edges() const { return static_cast<int>(in_.size()); }
  Region complement() const;
  bool contains(const Ribbon& r) const;
  bool operator==(const Region&) const = default;

 private:
  std::vector<bool> in_;
};

// Edges of the complement not incident to any vertex used by the region.
Region interior_complement(const Lattice& lat, const Region& lambda);
Region boundary(const Lattice& lat, const Region& lambda);
bool site_in(const Lattice& lat, const Region& lambda, const Site& s);
bool site_on_boundary(const Lattice& lat, const Region& lambda, const Site& s);

enum class ConeStyle { kClosedQuadrant, kTouchingRays };

// Quadrant cone with apex vertex (x, y) opened towards two orthogonal
// directions, truncated to the patch.
Region cone_make(const Lattice& lat, int apex_x, int apex_y, Dir a, Dir b,
                 ConeStyle style = ConeStyle::kClosedQuadrant);
Dir parse_dir(std::string_view s);

// Shortest standard ribbon from s0 to s1 whose edges lie in the region;
// ties broken by ascending edge id.
Ribbon ribbon_between(const Lattice& lat, const Site& s0, const Site& s1, const Region& region);

// Walks a vertex path given as compass steps ("EEN..."), inserting dual
// triangles to keep faces on the right. Starts at `start`; if `end_quadrant`
// is set, trailing dual triangles rotate the final site to that quadrant.
Ribbon ribbon_walk(const Lattice& lat, const Site& start, std::string_view steps,
                   std::optional<int> end_quadrant = std::nullopt);

// Smallest closed ribbons at a site: four dual triangles around the vertex
// (alpha) and four direct triangles around the face (beta).
Ribbon alpha_ribbon(const Lattice& lat, const Site& s);
Ribbon beta_ribbon(const Lattice& lat, const Site& s);

// Closed counterclockwise ribbon along the square of vertices at Chebyshev
// distance `radius` from the target vertex.
Ribbon closed_loop_around(const Lattice& lat, const Site& target, int radius);
// True when the site lies inside the square traced by closed_loop_around.
bool loop_encloses(const Lattice& lat, const Site& target, int radius, const Site& s);

// Every standard ribbon with 1..max_len triangles inside the region, in
// deterministic order (start site, then edge ids along the ribbon).
std::vector<Ribbon> enumerate_ribbons(const Lattice& lat, const Region& region, int max_len);

// Finite-patch audit of the connectivity requirements on cones. Counts the
// site pairs for which the requirement fails:
//   inside: two sites in the region joined by a ribbon inside it;
//   through: two boundary sites joined by tau0 rho tau1 with rho inside and
//            tau0, tau1 outside and single triangles or trivial;
//   outside: two boundary sites joined by a ribbon in the complement.
// Ribbons have a fixed handedness, so some boundary sites admit no first
// (or last) triangle on the required side at all. The live counters only
// consider pairs whose endpoints can be left and entered that way.
struct ConeAudit {
  int inside_sites = 0;
  int boundary_sites = 0;
  int inside_failures = 0;
  int through_failures = 0;
  int outside_failures = 0;
  int through_live_pairs = 0;
  int through_live_failures = 0;
  int outside_live_pairs = 0;
  int outside_live_failures = 0;
};
ConeAudit audit_cone(const Lattice& lat, const Region& region, bool full_stars_only = true);

}  // namespace qd

#endif  // QDOUBLE_LATTICE_HPP_
