#ifndef MAGNL_POTENTIAL_HPP
#define MAGNL_POTENTIAL_HPP

#include <string_view>
#include <vector>

#include "magnl/geometry.hpp"

namespace magnl {

/// Catalog of closed-form gauge functions; all are smooth on the plane so the
/// field model stays twice continuously differentiable everywhere.
enum class GaugeFunction { XY, XSquared, SinCos };

GaugeFunction parse_gauge_name(std::string_view name);
std::string_view gauge_name(GaugeFunction chi);

struct GaugeTerm {
  GaugeFunction chi = GaugeFunction::XY;
  double amplitude = 0.0;
};

/// Vector potential A = (b0/2)(-y, x) + sum_k amplitude_k * grad(chi_k).
/// The planar curl of A is the uniform field b0 regardless of gauge terms.
struct PotentialModel {
  double b0 = 0.0;
  std::vector<GaugeTerm> gauges;

  static PotentialModel uniform(double b0) { return PotentialModel{b0, {}}; }
};

Vec2 eval_potential(const PotentialModel& model, double x, double y);

/// Central-difference estimate of rot(A) = dAy/dx - dAx/dy. When a domain
/// polygon is given, the stencil must stay inside it.
double numeric_curl(const PotentialModel& model, double x, double y, double step,
                    const Polygon* domain = nullptr);

/// Returns the model with amplitude * grad(chi) added; the curl is unchanged.
PotentialModel gauge_shift(const PotentialModel& model, std::string_view chi_name,
                           double amplitude);

/// Sup of |A| sampled on mesh nodes and the assembly quadrature points
/// (edge midpoints). A lower bound on the true sup-norm, tightened by mesh
/// density; dominates every value the assembled form uses.
double sup_norm_on_mesh(const PotentialModel& model, const Mesh& mesh);

/// Sup of |A| on an n x n lattice over the polygon's bounding box, restricted
/// to points inside the polygon.
double sup_norm_sampled(const PotentialModel& model, const Polygon& domain, int n);

}  // namespace magnl

#endif  // MAGNL_POTENTIAL_HPP
