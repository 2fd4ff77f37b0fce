#ifndef MAGNL_LEMMAS_HPP
#define MAGNL_LEMMAS_HPP

#include <string>
#include <vector>

#include "magnl/coupling.hpp"

namespace magnl {

struct LemmaSample {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;      // right side without the unknown constant
  double implied = 0.0;  // constant that would make the inequality tight
  bool pass = true;
};

/// One verified inequality. When the constant is explicit the samples check
/// the inequality directly; when it is not, "pass" means the implied constant
/// stays bounded (no sample exceeds three times the median) across the sweep.
struct LemmaReport {
  std::string lemma;
  bool pass = true;
  std::vector<LemmaSample> samples;
  std::string note;
};

/// |(H+1)z|_0^2 >= |Hz|_0^2 + |z|_0^2; algebraically equivalent to the
/// positivity of the form, so it must hold to rounding on every assembled
/// pair.
LemmaReport verify_energy_shift(const FormPair& fp, const std::vector<VectorC>& samples);

/// H1 energy against the magnetic form:
/// integral(|grad v|^2 + |v|^2) <= C3 * integral(|i grad v + A v|^2 + |v|^2)
/// with the explicit C3 = max(2, 4 sup|A|^2 + 1). Must pass on every sample.
LemmaReport verify_field_comparison(const FormPair& magnetic, const FormPair& plain,
                                    double field_sup, const std::vector<VectorC>& samples);

/// One sweep entry for the ball-restricted bounds.
struct BallCase {
  double eps = 0.0;
  double radius = 0.0;  // intermediate radius in (eps, 2 eps)
  const CouplingPair* cp = nullptr;
  const SpectralResult* omega_modes = nullptr;
  const SpectralResult* hole_modes = nullptr;
};

/// Ball-restricted integral bounds across an eps sweep. Returns three
/// reports: L2 mass of punctured-domain functions against eps times their
/// energy, and gradient/value integrals of domain functions against
/// radius^{4/3} times the squared graph norm.
std::vector<LemmaReport> verify_ball_bounds(const std::vector<BallCase>& cases);

/// Circle trace against the exterior H1 energy; implied constant bounded
/// across samples and eps.
LemmaReport verify_trace_bound(const std::vector<BallCase>& cases, int n_phi = 256);

/// Pointwise bound along an obstacle-free axis half-line with the explicit
/// constant max(2/dist, 2 diam)^{1/2}. Throws PropertyStarViolation when a
/// point has no free half-line.
LemmaReport verify_line_bound(const Mesh& hole_mesh, const Polygon& domain,
                              const std::vector<Vec2>& points, const VectorC& u);

/// Subset-mass inequality on a convex region: the L2 mass of Q is bounded by
/// the G-average plus a gradient term with an unknown dimensional constant;
/// the report carries the implied constant per sample.
LemmaReport verify_convex_subset_bound(const FormPair& fp, const std::vector<int>& q_elems,
                                       const std::vector<int>& g_elems,
                                       const std::vector<int>& pi_elems, double pi_diameter,
                                       const std::vector<VectorC>& samples);

/// Refinement study: the implied constant must be stable (within a factor of
/// three) between a mesh and its halved-h refinement.
LemmaReport verify_convex_subset_refinement(const FormPair& coarse, const FormPair& fine,
                                            Vec2 center, double r_inner, double r_outer,
                                            int n_modes, double tol);

}  // namespace magnl

#endif  // MAGNL_LEMMAS_HPP
