#include "magnl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "magnl/errors.hpp"

namespace magnl {

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polygon utilities
// ---------------------------------------------------------------------------

double polygon_area(const Polygon& poly) {
  double s = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    s += cross(a, b);
  }
  return 0.5 * s;
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  // Crossing-number test; boundary points are treated as outside via the
  // half-open edge convention, which is all the sampling callers need.
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

double polygon_diameter(const Polygon& poly) {
  double d = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, dist(poly[i], poly[j]));
  return d;
}

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * ab);
}

double dist_to_polygon_boundary(Vec2 p, const Polygon& poly) {
  double d = std::numeric_limits<double>::max();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i)
    d = std::min(d, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
  return d;
}

namespace {

int orient(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  const double eps = 1e-14 * (std::abs(b.x - a.x) + std::abs(b.y - a.y) +
                              std::abs(c.x - a.x) + std::abs(c.y - a.y) + 1e-300);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) - 1e-14 <= p.x && p.x <= std::max(a.x, b.x) + 1e-14 &&
         std::min(a.y, b.y) - 1e-14 <= p.y && p.y <= std::max(a.y, b.y) + 1e-14;
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

DomainSpec DomainSpec::rectangle(double x0, double y0, double x1, double y1) {
  DomainSpec s;
  s.kind = DomainKind::Rectangle;
  s.x0 = x0;
  s.y0 = y0;
  s.x1 = x1;
  s.y1 = y1;
  return s;
}

DomainSpec DomainSpec::disk(Vec2 center, double radius, int segments) {
  DomainSpec s;
  s.kind = DomainKind::Disk;
  s.center = center;
  s.radius = radius;
  s.segments = segments;
  return s;
}

HoleSpec HoleSpec::none() { return HoleSpec{}; }

HoleSpec HoleSpec::disk(Vec2 center, double scale, int segments) {
  HoleSpec s;
  s.kind = HoleKind::Disk;
  s.center = center;
  s.scale = scale;
  s.segments = segments;
  return s;
}

HoleSpec HoleSpec::convex_polygon(Vec2 center, double scale, std::vector<Vec2> rel) {
  HoleSpec s;
  s.kind = HoleKind::ConvexPolygon;
  s.center = center;
  s.scale = scale;
  s.vertices = std::move(rel);
  return s;
}

HoleSpec HoleSpec::segment_slit(Vec2 center, double scale, double angle) {
  HoleSpec s;
  s.kind = HoleKind::SegmentSlit;
  s.center = center;
  s.scale = scale;
  s.angle = angle;
  return s;
}

HoleSpec HoleSpec::l_slit(Vec2 center, double scale, double angle) {
  HoleSpec s;
  s.kind = HoleKind::LSlit;
  s.center = center;
  s.scale = scale;
  s.angle = angle;
  return s;
}

HoleSpec HoleSpec::split_ring(Vec2 center, double scale, double gap_fraction,
                              double ring_factor, int segments) {
  HoleSpec s;
  s.kind = HoleKind::SplitRing;
  s.center = center;
  s.scale = scale;
  s.gap_fraction = gap_fraction;
  s.ring_factor = ring_factor;
  s.segments = segments;
  return s;
}

Polygon build_domain(const DomainSpec& spec) {
  if (spec.kind == DomainKind::Rectangle) {
    if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0))
      throw InvalidSpecError("domain rectangle is degenerate");
    return {{spec.x0, spec.y0}, {spec.x1, spec.y0}, {spec.x1, spec.y1}, {spec.x0, spec.y1}};
  }
  if (!(spec.radius > 0)) throw InvalidSpecError("domain disk radius must be positive");
  if (spec.segments < 16) throw InvalidSpecError("domain disk needs at least 16 segments");
  Polygon poly;
  poly.reserve(spec.segments);
  for (int k = 0; k < spec.segments; ++k) {
    const double t = 2.0 * M_PI * k / spec.segments;
    poly.push_back(spec.center + spec.radius * Vec2{std::cos(t), std::sin(t)});
  }
  return poly;
}

std::vector<std::array<Vec2, 2>> HoleGeometry::curve_segments() const {
  std::vector<std::array<Vec2, 2>> segs;
  if (fat) {
    const size_t n = boundary.size();
    for (size_t i = 0; i < n; ++i) segs.push_back({boundary[i], boundary[(i + 1) % n]});
  }
  for (const auto& pl : polylines)
    for (size_t i = 0; i + 1 < pl.size(); ++i) segs.push_back({pl[i], pl[i + 1]});
  return segs;
}

HoleGeometry build_hole(const HoleSpec& spec) {
  HoleGeometry g;
  g.kind = spec.kind;
  g.center = spec.center;
  g.scale = spec.scale;
  if (spec.kind == HoleKind::None) return g;

  if (!(spec.scale > 0)) throw InvalidSpecError("hole scale must be positive");
  const Vec2 p = spec.center;
  const double eps = spec.scale;

  switch (spec.kind) {
    case HoleKind::Disk: {
      const int n = std::max(32, spec.segments);
      g.fat = true;
      g.boundary.reserve(n);
      for (int k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * k / n;
        g.boundary.push_back(p + eps * Vec2{std::cos(t), std::sin(t)});
      }
      break;
    }
    case HoleKind::ConvexPolygon: {
      if (spec.vertices.size() < 3)
        throw InvalidSpecError("convex-polygon hole needs at least 3 vertices");
      g.fat = true;
      for (const Vec2& v : spec.vertices) {
        if (norm(v) > 1.0 + 1e-12)
          throw InvalidSpecError("convex-polygon hole vertex escapes the unit ball");
        g.boundary.push_back(p + eps * v);
      }
      if (polygon_area(g.boundary) <= 0)
        throw InvalidSpecError("convex-polygon hole must be CCW with positive area");
      // Convexity: all turns non-negative.
      const size_t n = g.boundary.size();
      for (size_t i = 0; i < n; ++i) {
        const Vec2 a = g.boundary[i];
        const Vec2 b = g.boundary[(i + 1) % n];
        const Vec2 c = g.boundary[(i + 2) % n];
        if (cross(b - a, c - b) < -1e-12 * eps * eps)
          throw InvalidSpecError("convex-polygon hole is not convex");
      }
      break;
    }
    case HoleKind::SegmentSlit: {
      const Vec2 d{std::cos(spec.angle), std::sin(spec.angle)};
      g.polylines.push_back({p - eps * d, p + eps * d});
      break;
    }
    case HoleKind::LSlit: {
      const double ca = std::cos(spec.angle), sa = std::sin(spec.angle);
      const Vec2 d1{ca, sa};
      const Vec2 d2{-sa, ca};
      g.polylines.push_back({p + eps * d1, p, p + eps * d2});
      break;
    }
    case HoleKind::SplitRing: {
      if (!(spec.gap_fraction > 0.0 && spec.gap_fraction < 1.0))
        throw InvalidSpecError("split-ring gap fraction must lie in (0, 1)");
      if (!(spec.ring_factor > 0.0 && spec.ring_factor <= 1.0))
        throw InvalidSpecError("split-ring ring factor must lie in (0, 1]");
      const double rho = spec.ring_factor * eps;
      const int n = std::max(32, spec.segments);
      const double a0 = spec.angle + M_PI * spec.gap_fraction;
      const double span = 2.0 * M_PI * (1.0 - spec.gap_fraction);
      Polyline ring;
      ring.reserve(n + 1);
      for (int k = 0; k <= n; ++k) {
        const double t = a0 + span * k / n;
        ring.push_back(p + rho * Vec2{std::cos(t), std::sin(t)});
      }
      g.polylines.push_back(std::move(ring));
      break;
    }
    case HoleKind::None:
      break;
  }

  // The hole must stay inside the ball of radius scale around its center.
  for (const auto& seg : g.curve_segments())
    for (const Vec2& q : seg)
      if (dist(q, p) > eps * (1.0 + 1e-12))
        throw InvalidSpecError("hole escapes its bounding ball");
  return g;
}

// ---------------------------------------------------------------------------
// Star condition
// ---------------------------------------------------------------------------

namespace {

bool ray_hits_hole(Vec2 from, Vec2 to, const std::vector<std::array<Vec2, 2>>& segs) {
  for (const auto& s : segs)
    if (segments_intersect(from, to, s[0], s[1])) return true;
  return false;
}

}  // namespace

PropertyStarReport check_property_star(const Polygon& domain, const HoleGeometry& hole,
                                       int grid_n) {
  if (grid_n < 16) throw InvalidSpecError("property-star grid_n must be at least 16");

  PropertyStarReport rep;
  rep.grid_n = grid_n;

  double bx0 = domain[0].x, bx1 = bx0, by0 = domain[0].y, by1 = by0;
  for (const Vec2& v : domain) {
    bx0 = std::min(bx0, v.x);
    bx1 = std::max(bx1, v.x);
    by0 = std::min(by0, v.y);
    by1 = std::max(by1, v.y);
  }
  const double margin = 1.0 + std::max(bx1 - bx0, by1 - by0);
  const auto segs = hole.curve_segments();

  // Curve-proximity tolerance: points on the hole itself are skipped.
  const double on_tol = 1e-12 * margin;

  for (int i = 0; i < grid_n; ++i) {
    const double x = bx0 + (bx1 - bx0) * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double y = by0 + (by1 - by0) * j / (grid_n - 1);
      const Vec2 q{x, y};
      if (!point_in_polygon(q, domain)) continue;
      if (hole.fat && point_in_polygon(q, hole.boundary)) continue;
      bool on_curve = false;
      for (const auto& s : segs)
        if (dist_point_segment(q, s[0], s[1]) <= on_tol) {
          on_curve = true;
          break;
        }
      if (on_curve) continue;

      ++rep.samples_tested;
      const std::array<Vec2, 4> ends = {Vec2{x, by1 + margin}, Vec2{x, by0 - margin},
                                        Vec2{bx0 - margin, y}, Vec2{bx1 + margin, y}};
      std::array<bool, 4> hit{};
      bool free_ray = false;
      for (int r = 0; r < 4; ++r) {
        hit[r] = ray_hits_hole(q, ends[r], segs);
        if (!hit[r]) free_ray = true;
      }
      if (!free_ray && rep.compliant) {
        rep.compliant = false;
        rep.witness = q;
        rep.witness_rays_hit = hit;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Meshing
// ---------------------------------------------------------------------------

double Mesh::tri_area(int t) const {
  const auto& tr = tris[t];
  return 0.5 * cross(nodes[tr[1]] - nodes[tr[0]], nodes[tr[2]] - nodes[tr[0]]);
}

Vec2 Mesh::centroid(int t) const {
  const auto& tr = tris[t];
  return (1.0 / 3.0) * (nodes[tr[0]] + nodes[tr[1]] + nodes[tr[2]]);
}

double Mesh::area() const {
  double s = 0.0;
  for (int t = 0; t < n_tris(); ++t) s += tri_area(t);
  return s;
}

namespace {

bool point_in_triangle(const Mesh& m, int t, Vec2 p, double tol) {
  const auto& tr = m.tris[t];
  const Vec2 a = m.nodes[tr[0]], b = m.nodes[tr[1]], c = m.nodes[tr[2]];
  const double s0 = cross(b - a, p - a);
  const double s1 = cross(c - b, p - b);
  const double s2 = cross(a - c, p - c);
  return s0 >= -tol && s1 >= -tol && s2 >= -tol;
}

}  // namespace

int Mesh::locate(Vec2 p) const {
  if (cell_tris.empty()) return -1;
  const int ci = std::clamp(static_cast<int>(std::floor((p.x - grid_origin.x) / hx)), 0, ncx - 1);
  const int cj = std::clamp(static_cast<int>(std::floor((p.y - grid_origin.y) / hy)), 0, ncy - 1);
  const double tol = 1e-12 * hx * hy;
  int best = -1;
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int i = ci + di, j = cj + dj;
      if (i < 0 || i >= ncx || j < 0 || j >= ncy) continue;
      for (int t : cell_tris[static_cast<size_t>(j) * ncx + i]) {
        if (t < 0) continue;
        if (point_in_triangle(*this, t, p, tol))
          if (best < 0 || t < best) best = t;
      }
    }
  }
  return best;
}

std::vector<std::array<Vec2, 2>> Mesh::hole_edge_segments() const {
  std::vector<std::array<Vec2, 2>> segs;
  for (const BoundaryEdge& e : boundary)
    if (e.hole) segs.push_back({nodes[e.a], nodes[e.b]});
  return segs;
}

namespace {

void finalize_cells_and_boundary(Mesh& m, const std::set<std::pair<int, int>>* parent_outer) {
  // Cell -> triangle lookup.
  m.cell_tris.assign(static_cast<size_t>(m.ncx) * m.ncy, {-1, -1});
  for (int t = 0; t < m.n_tris(); ++t) {
    const Vec2 c = m.centroid(t);
    const int ci =
        std::clamp(static_cast<int>(std::floor((c.x - m.grid_origin.x) / m.hx)), 0, m.ncx - 1);
    const int cj =
        std::clamp(static_cast<int>(std::floor((c.y - m.grid_origin.y) / m.hy)), 0, m.ncy - 1);
    auto& slot = m.cell_tris[static_cast<size_t>(cj) * m.ncx + ci];
    if (slot[0] < 0)
      slot[0] = t;
    else if (slot[1] < 0)
      slot[1] = t;
    else
      throw InternalError("background cell holds more than two triangles");
  }

  // Boundary edges: edges with exactly one incident triangle.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tr : m.tris) {
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  m.boundary.clear();
  for (const auto& [edge, count] : edge_count) {
    if (count != 1) continue;
    BoundaryEdge be;
    be.a = edge.first;
    be.b = edge.second;
    if (parent_outer) {
      const int pa = m.parent_node.empty() ? be.a : m.parent_node[be.a];
      const int pb = m.parent_node.empty() ? be.b : m.parent_node[be.b];
      be.hole = parent_outer->count({std::min(pa, pb), std::max(pa, pb)}) == 0;
    } else {
      be.hole = false;
    }
    m.boundary.push_back(be);
  }
}

void check_positive_areas(const Mesh& m) {
  for (int t = 0; t < m.n_tris(); ++t)
    if (!(m.tri_area(t) > 0))
      throw AssemblyError("triangle " + std::to_string(t) + " has nonpositive area");
}

}  // namespace

std::shared_ptr<Mesh> triangulate_domain(const DomainSpec& domain, double h) {
  if (!(h > 0)) throw InvalidSpecError("mesh size h must be positive");
  const Polygon poly = build_domain(domain);

  double bx0 = poly[0].x, bx1 = bx0, by0 = poly[0].y, by1 = by0;
  for (const Vec2& v : poly) {
    bx0 = std::min(bx0, v.x);
    bx1 = std::max(bx1, v.x);
    by0 = std::min(by0, v.y);
    by1 = std::max(by1, v.y);
  }

  auto mesh = std::make_shared<Mesh>();
  mesh->ncx = std::max(1, static_cast<int>(std::lround((bx1 - bx0) / h)));
  mesh->ncy = std::max(1, static_cast<int>(std::lround((by1 - by0) / h)));
  mesh->hx = (bx1 - bx0) / mesh->ncx;
  mesh->hy = (by1 - by0) / mesh->ncy;
  mesh->grid_origin = {bx0, by0};
  mesh->h = std::max(mesh->hx, mesh->hy);

  const int nvx = mesh->ncx + 1, nvy = mesh->ncy + 1;
  const bool rect = domain.kind == DomainKind::Rectangle;

  auto lattice = [&](int i, int j) {
    return Vec2{bx0 + mesh->hx * i, by0 + mesh->hy * j};
  };

  // Collect kept triangles as lattice-index triples, then renumber nodes.
  std::vector<std::array<long, 3>> kept;  // lattice flat indices
  auto flat = [nvx](int i, int j) { return static_cast<long>(j) * nvx + i; };
  for (int j = 0; j < mesh->ncy; ++j) {
    for (int i = 0; i < mesh->ncx; ++i) {
      const std::array<std::array<long, 3>, 2> cand = {{
          {flat(i, j), flat(i + 1, j), flat(i + 1, j + 1)},
          {flat(i, j), flat(i + 1, j + 1), flat(i, j + 1)},
      }};
      for (const auto& tri : cand) {
        if (!rect) {
          Vec2 c{0, 0};
          for (long f : tri)
            c = c + lattice(static_cast<int>(f % nvx), static_cast<int>(f / nvx));
          c = (1.0 / 3.0) * c;
          if (!point_in_polygon(c, poly)) continue;
        }
        kept.push_back(tri);
      }
    }
  }
  if (kept.empty()) throw ResolutionError("triangulation kept no elements");

  std::vector<char> used(static_cast<size_t>(nvx) * nvy, 0);
  for (const auto& tri : kept)
    for (long f : tri) used[f] = 1;
  mesh->grid_node.assign(used.size(), -1);
  int next = 0;
  for (long f = 0; f < static_cast<long>(used.size()); ++f) {
    if (!used[f]) continue;
    mesh->grid_node[f] = next++;
    const int i = static_cast<int>(f % nvx), j = static_cast<int>(f / nvx);
    mesh->nodes.push_back(lattice(i, j));
    mesh->node_grid.push_back({i, j});
  }
  for (const auto& tri : kept)
    mesh->tris.push_back({mesh->grid_node[tri[0]], mesh->grid_node[tri[1]],
                          mesh->grid_node[tri[2]]});

  check_positive_areas(*mesh);
  finalize_cells_and_boundary(*mesh, nullptr);
  return mesh;
}

namespace {

// Snaps a polyline onto a chain of lattice nodes of the root mesh, connecting
// consecutive snapped nodes through existing mesh edges (horizontal, vertical,
// or the main diagonal of a cell).
std::vector<int> snap_polyline(const Mesh& root, const Polyline& pl) {
  const int nvx = root.ncx + 1;
  auto node_at = [&](int i, int j) -> int {
    if (i < 0 || i > root.ncx || j < 0 || j > root.ncy) return -1;
    return root.grid_node[static_cast<size_t>(j) * nvx + i];
  };
  auto snap = [&](Vec2 p) -> std::array<int, 2> {
    const int i =
        std::clamp(static_cast<int>(std::lround((p.x - root.grid_origin.x) / root.hx)), 0, root.ncx);
    const int j =
        std::clamp(static_cast<int>(std::lround((p.y - root.grid_origin.y) / root.hy)), 0, root.ncy);
    return {i, j};
  };

  const double step = 0.25 * std::min(root.hx, root.hy);
  std::vector<std::array<int, 2>> snapped;
  for (size_t s = 0; s + 1 < pl.size(); ++s) {
    const Vec2 a = pl[s], b = pl[s + 1];
    const double len = dist(a, b);
    const int nsub = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int k = (s == 0 ? 0 : 1); k <= nsub; ++k) {
      const Vec2 q = a + (static_cast<double>(k) / nsub) * (b - a);
      const auto ij = snap(q);
      if (snapped.empty() || snapped.back() != ij) snapped.push_back(ij);
    }
  }

  std::vector<int> chain;
  auto push_node = [&](int i, int j) {
    const int id = node_at(i, j);
    if (id < 0) throw GeometryError("slit leaves the meshed domain");
    if (chain.empty() || chain.back() != id) chain.push_back(id);
  };
  if (!snapped.empty()) push_node(snapped[0][0], snapped[0][1]);
  for (size_t s = 0; s + 1 < snapped.size(); ++s) {
    const auto [i0, j0] = snapped[s];
    const auto [i1, j1] = snapped[s + 1];
    const int di = i1 - i0, dj = j1 - j0;
    if (std::abs(di) > 1 || std::abs(dj) > 1)
      throw InternalError("slit sampling step too coarse for the grid");
    if ((di == 1 && dj == -1) || (di == -1 && dj == 1)) {
      // Anti-diagonal pair: no direct edge; detour through the lattice
      // neighbor closer to the slit sample.
      const Vec2 mid1{root.grid_origin.x + root.hx * (i0 + di), root.grid_origin.y + root.hy * j0};
      const Vec2 mid2{root.grid_origin.x + root.hx * i0, root.grid_origin.y + root.hy * (j0 + dj)};
      const Vec2 target = 0.5 * (Vec2{root.grid_origin.x + root.hx * i0,
                                      root.grid_origin.y + root.hy * j0} +
                                 Vec2{root.grid_origin.x + root.hx * i1,
                                      root.grid_origin.y + root.hy * j1});
      if (dist(mid1, target) <= dist(mid2, target))
        push_node(i0 + di, j0);
      else
        push_node(i0, j0 + dj);
    }
    push_node(i1, j1);
  }
  return chain;
}

}  // namespace

std::shared_ptr<Mesh> carve_hole(const std::shared_ptr<const Mesh>& parent,
                                 const HoleGeometry& hole) {
  const Mesh& root = *parent;
  if (!root.parent_node.empty())
    throw InvalidSpecError("carve_hole expects a root mesh");

  // Parent's outer boundary edges, for tagging.
  std::set<std::pair<int, int>> parent_outer;
  for (const BoundaryEdge& e : root.boundary)
    if (!e.hole) parent_outer.insert({std::min(e.a, e.b), std::max(e.a, e.b)});

  auto mesh = std::make_shared<Mesh>();
  mesh->h = root.h;
  mesh->grid_origin = root.grid_origin;
  mesh->hx = root.hx;
  mesh->hy = root.hy;
  mesh->ncx = root.ncx;
  mesh->ncy = root.ncy;

  if (hole.empty()) {
    // Degenerate no-hole carve: identity submesh.
    mesh->nodes = root.nodes;
    mesh->tris = root.tris;
    mesh->node_grid = root.node_grid;
    mesh->parent_node.resize(root.nodes.size());
    std::iota(mesh->parent_node.begin(), mesh->parent_node.end(), 0);
    finalize_cells_and_boundary(*mesh, &parent_outer);
    return mesh;
  }

  if (hole.fat) {
    // Remove triangles whose centroid falls inside the hole polygon.
    std::vector<int> tri_keep;
    for (int t = 0; t < root.n_tris(); ++t)
      if (!point_in_polygon(root.centroid(t), hole.boundary)) tri_keep.push_back(t);
    if (tri_keep.size() == root.tris.size())
      throw ResolutionError("mesh too coarse: the hole removed no elements");

    std::vector<int> node_new(root.nodes.size(), -1);
    for (int t : tri_keep)
      for (int v : root.tris[t]) node_new[v] = 0;
    int next = 0;
    for (size_t v = 0; v < node_new.size(); ++v) {
      if (node_new[v] == 0) {
        node_new[v] = next++;
        mesh->nodes.push_back(root.nodes[v]);
        mesh->node_grid.push_back(root.node_grid[v]);
        mesh->parent_node.push_back(static_cast<int>(v));
      } else {
        node_new[v] = -1;
      }
    }
    for (int t : tri_keep)
      mesh->tris.push_back(
          {node_new[root.tris[t][0]], node_new[root.tris[t][1]], node_new[root.tris[t][2]]});

    check_positive_areas(*mesh);
    finalize_cells_and_boundary(*mesh, &parent_outer);
    return mesh;
  }

  // Thin hole: snap each polyline to a chain of mesh edges, then open the
  // mesh along those edges by duplicating interior chain nodes.
  std::set<std::pair<int, int>> crack_edges;
  for (const Polyline& pl : hole.polylines) {
    const std::vector<int> chain = snap_polyline(root, pl);
    if (chain.size() < 2)
      throw ResolutionError("mesh too coarse: slit snapped to fewer than two nodes");
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      if (chain[k] == chain[k + 1]) continue;
      crack_edges.insert({std::min(chain[k], chain[k + 1]), std::max(chain[k], chain[k + 1])});
    }
  }

  // Every crack edge must be an interior mesh edge (two incident triangles).
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (int t = 0; t < root.n_tris(); ++t) {
    const auto& tr = root.tris[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      edge_tris[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }
  for (const auto& ce : crack_edges) {
    auto it = edge_tris.find(ce);
    if (it == edge_tris.end() || it->second.size() != 2)
      throw GeometryError("slit chain is not made of interior mesh edges");
  }

  mesh->nodes = root.nodes;
  mesh->tris = root.tris;
  mesh->node_grid = root.node_grid;
  mesh->parent_node.resize(root.nodes.size());
  std::iota(mesh->parent_node.begin(), mesh->parent_node.end(), 0);

  // Nodes incident to crack edges.
  std::map<int, std::vector<int>> node_crack_neighbors;
  for (const auto& [a, b] : crack_edges) {
    node_crack_neighbors[a].push_back(b);
    node_crack_neighbors[b].push_back(a);
  }

  // Stars of candidate nodes (triangle lists, ascending ids).
  std::map<int, std::vector<int>> stars;
  for (int t = 0; t < root.n_tris(); ++t)
    for (int v : root.tris[t])
      if (node_crack_neighbors.count(v)) stars[v].push_back(t);

  struct Rewire {
    int tri;
    int old_node;
    int new_node;
  };
  std::vector<Rewire> rewires;

  for (const auto& [v, star] : stars) {
    // Union-find over the star: fans of triangles connected through
    // non-crack edges at v.
    std::vector<int> comp(star.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    auto unite = [&](int a, int b) { comp[find(a)] = find(b); };

    std::map<int, std::vector<int>> via_neighbor;  // other node w -> star slots
    for (size_t s = 0; s < star.size(); ++s) {
      const auto& tr = root.tris[star[s]];
      for (int w : tr)
        if (w != v) via_neighbor[w].push_back(static_cast<int>(s));
    }
    for (const auto& [w, slots] : via_neighbor) {
      if (slots.size() != 2) continue;
      if (crack_edges.count({std::min(v, w), std::max(v, w)})) continue;
      unite(slots[0], slots[1]);
    }

    // Group star triangles per component, ordered by smallest triangle id.
    std::map<int, std::vector<int>> groups;
    for (size_t s = 0; s < star.size(); ++s) groups[find(static_cast<int>(s))].push_back(star[s]);
    std::vector<std::vector<int>> fans;
    for (auto& [root_slot, tris_in] : groups) fans.push_back(tris_in);
    std::sort(fans.begin(), fans.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    for (size_t f = 1; f < fans.size(); ++f) {
      const int dup = mesh->n_nodes();
      mesh->nodes.push_back(root.nodes[v]);
      mesh->node_grid.push_back(root.node_grid[v]);
      mesh->parent_node.push_back(v);
      mesh->duplicated_nodes++;
      for (int t : fans[f]) rewires.push_back({t, v, dup});
    }
  }

  for (const Rewire& r : rewires)
    for (int& n : mesh->tris[r.tri])
      if (n == r.old_node) n = r.new_node;

  mesh->cracked = mesh->duplicated_nodes > 0;
  if (!mesh->cracked)
    throw ResolutionError("mesh too coarse: slit produced no duplicated nodes");

  check_positive_areas(*mesh);
  finalize_cells_and_boundary(*mesh, &parent_outer);
  return mesh;
}

std::shared_ptr<Mesh> triangulate(const DomainSpec& domain, const HoleSpec* hole, double h) {
  auto root = triangulate_domain(domain, h);
  if (!hole || hole->kind == HoleKind::None) return root;

  const Polygon poly = build_domain(domain);
  const double clearance = dist_to_polygon_boundary(hole->center, poly) - hole->scale;
  if (!(clearance > 0))
    throw InvalidSpecError("hole ball is not strictly inside the domain");
  if (h >= clearance)
    throw ResolutionError(
        fmt("mesh size %.6g does not fit the hole clearance %.6g to the boundary", h, clearance));
  if (h > hole->scale)
    throw ResolutionError(
        fmt("mesh size %.6g cannot resolve a hole of scale %.6g", h, hole->scale));

  return carve_hole(root, build_hole(*hole));
}

}  // namespace magnl
