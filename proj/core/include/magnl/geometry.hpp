#ifndef MAGNL_GEOMETRY_HPP
#define MAGNL_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace magnl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

using Polygon = std::vector<Vec2>;  // closed, CCW, last vertex != first
using Polyline = std::vector<Vec2>;

/// Signed area of a closed polygon (shoelace); positive for CCW.
double polygon_area(const Polygon& poly);

/// Strict interior test (points on the boundary count as outside).
bool point_in_polygon(Vec2 p, const Polygon& poly);

/// Maximum pairwise vertex distance.
double polygon_diameter(const Polygon& poly);

/// Distance from p to the boundary curve of the polygon.
double dist_to_polygon_boundary(Vec2 p, const Polygon& poly);

/// Closed segment intersection test, including touching configurations.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b);

// ---------------------------------------------------------------------------
// Domain and hole specifications
// ---------------------------------------------------------------------------

enum class DomainKind { Rectangle, Disk };

struct DomainSpec {
  DomainKind kind = DomainKind::Rectangle;
  // Rectangle corners.
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  // Disk (regular-polygon approximation).
  Vec2 center{};
  double radius = 0;
  int segments = 64;

  static DomainSpec rectangle(double x0, double y0, double x1, double y1);
  static DomainSpec disk(Vec2 center, double radius, int segments = 64);
};

enum class HoleKind { None, Disk, ConvexPolygon, SegmentSlit, LSlit, SplitRing };

struct HoleSpec {
  HoleKind kind = HoleKind::None;
  Vec2 center{};
  double scale = 0.0;  // the radius of the ball the hole lives in
  // Disk / split-ring discretization.
  int segments = 48;
  // Slit orientation (radians).
  double angle = 0.0;
  // Split-ring parameters: opening as a fraction of the full ring, and the
  // ring radius as a fraction of scale.
  double gap_fraction = 0.25;
  double ring_factor = 0.8;
  // Convex polygon vertices, relative to center in units of scale (|v| <= 1).
  std::vector<Vec2> vertices;

  static HoleSpec none();
  static HoleSpec disk(Vec2 center, double scale, int segments = 48);
  static HoleSpec convex_polygon(Vec2 center, double scale, std::vector<Vec2> rel_vertices);
  static HoleSpec segment_slit(Vec2 center, double scale, double angle = 0.0);
  static HoleSpec l_slit(Vec2 center, double scale, double angle = 0.0);
  static HoleSpec split_ring(Vec2 center, double scale, double gap_fraction = 0.25,
                             double ring_factor = 0.8, int segments = 64);
};

/// Curves realizing a hole. Fat holes carry a closed boundary polygon whose
/// interior is removed from the domain; thin holes carry open polylines of
/// zero Lebesgue measure.
struct HoleGeometry {
  HoleKind kind = HoleKind::None;
  bool fat = false;
  Polygon boundary;                 // fat holes: closed CCW polygon
  std::vector<Polyline> polylines;  // thin holes: open curves
  Vec2 center{};
  double scale = 0.0;

  bool empty() const { return kind == HoleKind::None; }
  /// All curve segments, for intersection queries.
  std::vector<std::array<Vec2, 2>> curve_segments() const;
};

/// Builds the closed CCW boundary polygon of the domain.
Polygon build_domain(const DomainSpec& spec);

/// Builds the hole curves; throws InvalidSpecError when the hole escapes the
/// ball of radius scale around its center.
HoleGeometry build_hole(const HoleSpec& spec);

// ---------------------------------------------------------------------------
// Star condition: every point of the punctured domain must have an
// axis-parallel half-line that avoids the hole.
// ---------------------------------------------------------------------------

struct PropertyStarReport {
  bool compliant = true;
  std::optional<Vec2> witness;  // present iff non-compliant
  int samples_tested = 0;
  int grid_n = 0;
  // For the witness: whether the {up, down, left, right} half-lines hit the hole.
  std::array<bool, 4> witness_rays_hit{false, false, false, false};
};

/// Samples grid_n x grid_n lattice points of the domain's bounding box, keeps
/// those strictly inside the punctured domain, and casts the four axis
/// half-lines against the hole curves. Reports the lexicographically smallest
/// witness when a point has all four half-lines blocked.
PropertyStarReport check_property_star(const Polygon& domain, const HoleGeometry& hole,
                                       int grid_n);

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  bool hole = false;  // false: outer boundary, true: hole-facing
};

/// Conforming triangulation on a structured background grid. Submeshes keep a
/// node-index map into their parent so that restriction and extension between
/// the two FE spaces are exact index operations.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> tris;  // CCW node triples
  std::vector<BoundaryEdge> boundary;
  double h = 0.0;

  // Submesh bookkeeping; empty for a root mesh.
  std::vector<int> parent_node;  // our node id -> parent node id
  bool cracked = false;          // slit nodes were duplicated
  int duplicated_nodes = 0;

  // Background grid (shared with submeshes; used for point location and
  // slit snapping).
  Vec2 grid_origin{};
  double hx = 0.0, hy = 0.0;
  int ncx = 0, ncy = 0;
  std::vector<int> grid_node;                 // lattice (i,j) -> node id or -1 (root only)
  std::vector<std::array<int, 2>> node_grid;  // node id -> lattice (i,j)
  std::vector<std::array<int, 2>> cell_tris;  // cell -> up to two triangle ids, -1 absent

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_tris() const { return static_cast<int>(tris.size()); }
  double tri_area(int t) const;
  Vec2 centroid(int t) const;
  double area() const;

  /// Triangle containing p (smallest id on ties), or -1.
  int locate(Vec2 p) const;

  /// Hole-facing boundary edges as geometric segments.
  std::vector<std::array<Vec2, 2>> hole_edge_segments() const;
};

/// Structured triangulation of the domain: background grid over the bounding
/// box, cells split into two CCW triangles, triangles kept when their
/// centroid lies inside the domain polygon.
std::shared_ptr<Mesh> triangulate_domain(const DomainSpec& domain, double h);

/// Derives the punctured-domain mesh from a root mesh. Fat holes remove the
/// triangles whose centroid falls inside the hole polygon; thin holes are
/// snapped to grid-edge chains and opened by node duplication, so the two
/// sides of a slit are disconnected while coordinates stay bit-identical.
std::shared_ptr<Mesh> carve_hole(const std::shared_ptr<const Mesh>& parent,
                                 const HoleGeometry& hole);

/// Convenience wrapper: root mesh, then carve when a hole is present.
/// Checks that h resolves the hole and its clearance to the boundary.
std::shared_ptr<Mesh> triangulate(const DomainSpec& domain, const HoleSpec* hole, double h);

}  // namespace magnl

#endif  // MAGNL_GEOMETRY_HPP
