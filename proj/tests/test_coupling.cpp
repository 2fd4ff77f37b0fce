#include <doctest.h>

#include <cmath>
#include <memory>

#include "magnl/coupling.hpp"
#include "magnl/errors.hpp"

using namespace magnl;

namespace {

struct Fixture {
  std::shared_ptr<Mesh> omega;
  std::shared_ptr<Mesh> holed;
  CouplingPair cp;
  Vec2 center{0.5, 0.5};
  double eps;

  explicit Fixture(double eps_in = 0.15, double h = 1.0 / 16,
                   HoleKind kind = HoleKind::Disk, double b0 = 1.0)
      : eps(eps_in) {
    omega = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), h);
    HoleSpec hs = kind == HoleKind::Disk ? HoleSpec::disk(center, eps)
                                         : HoleSpec::split_ring(center, eps, 0.1);
    holed = carve_hole(omega, build_hole(hs));
    cp = make_coupling(omega, holed, PotentialModel::uniform(b0), center, eps);
  }
};

}  // namespace

TEST_SUITE_BEGIN("coupling");

TEST_CASE("restriction of constants and of hole-supported indicators") {
  Fixture fx;
  const VectorC ones = VectorC::Ones(fx.cp.omega_form.n);
  const VectorC r = restrict_to_hole(fx.cp, ones);
  CHECK(r.size() == fx.cp.hole_form.n);
  for (int i = 0; i < r.size(); ++i) CHECK(r[i] == Complex(1.0, 0.0));

  // An indicator supported on a removed node restricts to zero.
  int removed = -1;
  for (int p = 0; p < fx.cp.omega_form.n; ++p)
    if (fx.cp.omega_to_hole[p] < 0) removed = p;
  REQUIRE(removed >= 0);
  VectorC ind = VectorC::Zero(fx.cp.omega_form.n);
  ind[removed] = 1.0;
  CHECK(restrict_to_hole(fx.cp, ind).norm() == 0.0);
}

TEST_CASE("restriction does not increase the L2 norm of eigenvectors") {
  Fixture fx;
  const ScaleNorms omega_norms(fx.cp.omega_form);
  const ScaleNorms hole_norms(fx.cp.hole_form);
  const SpectralResult modes = solve_lowest(fx.cp.omega_form, 4, 1e-8);
  for (int i = 0; i < 4; ++i) {
    const VectorC f = modes.eigenvectors.col(i);
    CHECK(hole_norms.norm(restrict_to_hole(fx.cp, f), 0) <=
          omega_norms.norm(f, 0) * (1 + 1e-12));
  }
}

TEST_CASE("zero extension and the exact round trip") {
  Fixture fx;
  const VectorC zero = VectorC::Zero(fx.cp.hole_form.n);
  CHECK(extend_by_zero(fx.cp, zero).norm() == 0.0);

  const VectorC ones = VectorC::Ones(fx.cp.hole_form.n);
  const VectorC ext = extend_by_zero(fx.cp, ones);
  for (int p = 0; p < fx.cp.omega_form.n; ++p) {
    if (fx.cp.omega_to_hole[p] >= 0)
      CHECK(ext[p] == Complex(1.0, 0.0));
    else
      CHECK(ext[p] == Complex(0.0, 0.0));
  }

  // Restriction of the zero extension gives the field back bitwise.
  const SpectralResult modes = solve_lowest(fx.cp.hole_form, 3, 1e-8);
  for (int i = 0; i < 3; ++i) {
    const VectorC u = modes.eigenvectors.col(i);
    const VectorC back = restrict_to_hole(fx.cp, extend_by_zero(fx.cp, u));
    CHECK((back - u).norm() == 0.0);
  }
}

TEST_CASE("radius choice: constants have vanishing angular energy everywhere") {
  Fixture fx;
  const VectorC ones = VectorC::Ones(fx.cp.hole_form.n);
  const RadiusChoice rc = choose_radius(fx.cp, ones);
  for (double e : rc.energies) CHECK(e < 1e-18);
  CHECK(rc.radius == rc.radii.front());  // ties resolve to the smallest radius
  CHECK(rc.radius > fx.eps);
  CHECK(rc.radius < 2 * fx.eps);
}

TEST_CASE("radius choice: the linear field has angular energy pi r^2") {
  Fixture fx;
  VectorC u(fx.cp.hole_form.n);
  for (int i = 0; i < fx.cp.hole_form.n; ++i)
    u[i] = Complex(fx.holed->nodes[i].x - fx.center.x, 0.0);  // exactly P1

  const RadiusChoice rc = choose_radius(fx.cp, u);
  for (size_t j = 0; j < rc.radii.size(); ++j) {
    const double expected = M_PI * rc.radii[j] * rc.radii[j];
    CHECK(rc.energies[j] == doctest::Approx(expected).epsilon(0.01));
  }
  CHECK(rc.radius == rc.radii.front());
}

TEST_CASE("chosen radius satisfies the annulus pigeonhole bound") {
  Fixture fx(0.15, 1.0 / 32);
  const SpectralResult modes = solve_lowest(fx.cp.hole_form, 6, 1e-8);
  for (int i = 0; i < 6; ++i) {
    const VectorC u = modes.eigenvectors.col(i);
    const RadiusChoice rc = choose_radius(fx.cp, u);
    std::vector<int> annulus;
    for (int t = 0; t < fx.holed->n_tris(); ++t) {
      const double r = dist(fx.holed->centroid(t), fx.center);
      if (r > fx.eps && r <= 2 * fx.eps) annulus.push_back(t);
    }
    const RestrictedEnergy e = restricted_energy(*fx.holed, u, annulus);
    CHECK(rc.angular_energy <= 4.0 * (e.grad + e.mass) * 1.10);
  }
}

TEST_CASE("radial extension formula at the center and outside the ball") {
  Fixture fx;
  const VectorC ones = VectorC::Ones(fx.cp.hole_form.n);
  const double et = 1.5 * fx.eps;
  const VectorC ext = extend_radial(fx.cp, ones, et);
  for (int p = 0; p < fx.cp.omega_form.n; ++p) {
    const double r = dist(fx.omega->nodes[p], fx.center);
    if (r >= et)
      CHECK(std::abs(ext[p] - Complex(1.0, 0.0)) < 1e-12);
    else
      CHECK(std::abs(ext[p] - Complex(r / et, 0.0)) < 1e-9);
  }
  // The mesh has a node exactly at the hole center.
  int center_node = -1;
  for (int p = 0; p < fx.cp.omega_form.n; ++p)
    if (dist(fx.omega->nodes[p], fx.center) < 1e-14) center_node = p;
  REQUIRE(center_node >= 0);
  CHECK(ext[center_node] == Complex(0.0, 0.0));

  CHECK_THROWS_AS(extend_radial(fx.cp, ones, 0.5 * fx.eps), InvalidSpecError);
}

TEST_CASE("radial extension obeys the polar energy bound") {
  Fixture fx(0.15, 1.0 / 32);
  const SpectralResult modes = solve_lowest(fx.cp.hole_form, 4, 1e-8);
  for (int i = 0; i < 4; ++i) {
    const VectorC u = modes.eigenvectors.col(i);
    const RadiusChoice rc = choose_radius(fx.cp, u);
    const VectorC ext = extend_radial(fx.cp, u, rc.radius);

    const std::vector<int> ball = elements_in_ball(*fx.omega, fx.center, rc.radius);
    const double lhs = restricted_energy(*fx.omega, ext, ball).grad;

    // Circle trace and angular energy at the chosen radius.
    const int n_phi = 256;
    double trace = 0;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2 * M_PI * k / n_phi;
      const Vec2 q = fx.center + rc.radius * Vec2{std::cos(phi), std::sin(phi)};
      trace += std::norm(eval_field(*fx.holed, u, q));
    }
    trace *= 2 * M_PI / n_phi;  // integral of |trace|^2 dphi

    const double rhs = 4.0 * (trace + rc.angular_energy);
    CHECK(lhs <= rhs * 1.10);
  }
}

TEST_CASE("closeness estimates: exact conditions and bounded maps") {
  Fixture fx(0.15, 1.0 / 24);
  const TestSet ts = make_test_set(fx.cp, 6, 4, 2024);
  const ClosenessReport rep = estimate_closeness(fx.cp, ts);

  CHECK(rep.delta(Condition::RestrictionAgreement) == 0.0);
  CHECK(rep.delta(Condition::RoundTripIdentity) == 0.0);
  CHECK(rep.delta(Condition::NormBound) <= 2.0);
  for (double d : rep.deltas) CHECK(d >= 0.0);
  CHECK(rep.delta(Condition::ZeroExtensionDefect) > 0.0);
  CHECK(rep.delta(Condition::ExtensionMismatch) > 0.0);
  CHECK(rep.chosen_radii.size() == ts.on_hole.size());
  for (double r : rep.chosen_radii) {
    CHECK(r > fx.eps);
    CHECK(r < 2 * fx.eps);
  }
}

TEST_CASE("cracked meshes lose the exact round trip but report honestly") {
  Fixture fx(0.2, 1.0 / 24, HoleKind::SplitRing);
  CHECK(!fx.cp.injective);
  const TestSet ts = make_test_set(fx.cp, 4, 2, 99);
  const ClosenessReport rep = estimate_closeness(fx.cp, ts);
  CHECK(rep.delta(Condition::RestrictionAgreement) == 0.0);
  CHECK(rep.delta(Condition::RoundTripIdentity) >= 0.0);
  CHECK(rep.delta(Condition::NormBound) <= 2.0);
}

TEST_CASE("degenerate test functions are rejected") {
  Fixture fx;
  TestSet ts;
  ts.on_omega.push_back(VectorC::Zero(fx.cp.omega_form.n));
  ts.on_hole.push_back(VectorC::Ones(fx.cp.hole_form.n));
  CHECK_THROWS_AS(estimate_closeness(fx.cp, ts), InvalidSpecError);
}

TEST_SUITE_END();
