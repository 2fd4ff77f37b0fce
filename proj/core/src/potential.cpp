#include "magnl/potential.hpp"

#include <cmath>
#include <string>

#include "magnl/errors.hpp"

namespace magnl {

GaugeFunction parse_gauge_name(std::string_view name) {
  if (name == "xy") return GaugeFunction::XY;
  if (name == "x2") return GaugeFunction::XSquared;
  if (name == "sincos") return GaugeFunction::SinCos;
  throw InvalidSpecError("unknown gauge function '" + std::string(name) +
                         "' (catalog: xy, x2, sincos)");
}

std::string_view gauge_name(GaugeFunction chi) {
  switch (chi) {
    case GaugeFunction::XY:
      return "xy";
    case GaugeFunction::XSquared:
      return "x2";
    case GaugeFunction::SinCos:
      return "sincos";
  }
  return "?";
}

namespace {

Vec2 gauge_gradient(GaugeFunction chi, double x, double y) {
  switch (chi) {
    case GaugeFunction::XY:
      return {y, x};
    case GaugeFunction::XSquared:
      return {2.0 * x, 0.0};
    case GaugeFunction::SinCos:
      return {std::cos(x) * std::cos(y), -std::sin(x) * std::sin(y)};
  }
  return {0.0, 0.0};
}

}  // namespace

Vec2 eval_potential(const PotentialModel& model, double x, double y) {
  Vec2 a{-0.5 * model.b0 * y, 0.5 * model.b0 * x};
  for (const GaugeTerm& g : model.gauges)
    a = a + g.amplitude * gauge_gradient(g.chi, x, y);
  return a;
}

double numeric_curl(const PotentialModel& model, double x, double y, double step,
                    const Polygon* domain) {
  if (!(step > 0)) throw InvalidSpecError("curl stencil step must be positive");
  if (domain) {
    const Vec2 pts[4] = {{x + step, y}, {x - step, y}, {x, y + step}, {x, y - step}};
    for (const Vec2& p : pts)
      if (!point_in_polygon(p, *domain))
        throw GeometryError("curl stencil leaves the domain");
  }
  const double day_dx =
      (eval_potential(model, x + step, y).y - eval_potential(model, x - step, y).y) / (2 * step);
  const double dax_dy =
      (eval_potential(model, x, y + step).x - eval_potential(model, x, y - step).x) / (2 * step);
  return day_dx - dax_dy;
}

PotentialModel gauge_shift(const PotentialModel& model, std::string_view chi_name,
                           double amplitude) {
  const GaugeFunction chi = parse_gauge_name(chi_name);
  PotentialModel out = model;
  if (amplitude == 0.0) return out;
  for (GaugeTerm& g : out.gauges) {
    if (g.chi == chi) {
      g.amplitude += amplitude;
      return out;
    }
  }
  out.gauges.push_back({chi, amplitude});
  return out;
}

double sup_norm_on_mesh(const PotentialModel& model, const Mesh& mesh) {
  double sup = 0.0;
  for (const Vec2& p : mesh.nodes) sup = std::max(sup, norm(eval_potential(model, p.x, p.y)));
  for (const auto& tr : mesh.tris) {
    for (int e = 0; e < 3; ++e) {
      const Vec2 m = 0.5 * (mesh.nodes[tr[e]] + mesh.nodes[tr[(e + 1) % 3]]);
      sup = std::max(sup, norm(eval_potential(model, m.x, m.y)));
    }
  }
  return sup;
}

double sup_norm_sampled(const PotentialModel& model, const Polygon& domain, int n) {
  double bx0 = domain[0].x, bx1 = bx0, by0 = domain[0].y, by1 = by0;
  for (const Vec2& v : domain) {
    bx0 = std::min(bx0, v.x);
    bx1 = std::max(bx1, v.x);
    by0 = std::min(by0, v.y);
    by1 = std::max(by1, v.y);
  }
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 p{bx0 + (bx1 - bx0) * i / (n - 1), by0 + (by1 - by0) * j / (n - 1)};
      if (!point_in_polygon(p, domain) && dist_to_polygon_boundary(p, domain) > 1e-12) continue;
      sup = std::max(sup, norm(eval_potential(model, p.x, p.y)));
    }
  }
  // Corner vertices of the polygon are extreme for every cataloged model.
  for (const Vec2& v : domain) sup = std::max(sup, norm(eval_potential(model, v.x, v.y)));
  return sup;
}

}  // namespace magnl
