#include <doctest.h>

#include <cmath>
#include <random>

#include "magnl/errors.hpp"
#include "magnl/potential.hpp"

using namespace magnl;

TEST_SUITE_BEGIN("potential");

TEST_CASE("closed-form evaluation") {
  const PotentialModel zero = PotentialModel::uniform(0.0);
  CHECK(eval_potential(zero, 0.3, -1.2).x == 0.0);
  CHECK(eval_potential(zero, 0.3, -1.2).y == 0.0);

  const PotentialModel b2 = PotentialModel::uniform(2.0);
  const Vec2 a = eval_potential(b2, 1.0, 0.0);
  CHECK(a.x == doctest::Approx(0.0));
  CHECK(a.y == doctest::Approx(1.0));

  const PotentialModel shifted = gauge_shift(PotentialModel::uniform(1.0), "xy", 1.0);
  const Vec2 s = eval_potential(shifted, 1.0, 1.0);
  CHECK(s.x == doctest::Approx(0.5));   // -1/2 + 1
  CHECK(s.y == doctest::Approx(1.5));   //  1/2 + 1
}

TEST_CASE("numeric curl recovers the uniform field") {
  CHECK(numeric_curl(PotentialModel::uniform(0.0), 0.2, 0.7, 1e-3) == doctest::Approx(0.0));
  CHECK(std::abs(numeric_curl(PotentialModel::uniform(3.0), 0.2, 0.7, 1e-3) - 3.0) < 1e-6);
}

TEST_CASE("curl is gauge invariant at random interior points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  const PotentialModel base = PotentialModel::uniform(1.5);
  for (const char* chi : {"xy", "x2", "sincos"}) {
    const PotentialModel shifted = gauge_shift(base, chi, 0.8);
    for (int i = 0; i < 100; ++i) {
      const double x = unif(rng), y = unif(rng);
      const double c0 = numeric_curl(base, x, y, 1e-4);
      const double c1 = numeric_curl(shifted, x, y, 1e-4);
      CHECK(std::abs(c0 - c1) < 1e-6);
    }
  }
}

TEST_CASE("gauge shift algebra") {
  const PotentialModel m = PotentialModel::uniform(1.0);
  const PotentialModel same = gauge_shift(m, "xy", 0.0);
  CHECK(same.gauges.empty());

  const PotentialModel g = gauge_shift(PotentialModel::uniform(0.0), "xy", 1.0);
  CHECK(eval_potential(g, 0.7, -0.3).x == doctest::Approx(-0.3));
  CHECK(eval_potential(g, 0.7, -0.3).y == doctest::Approx(0.7));
  CHECK(std::abs(numeric_curl(g, 0.2, 0.2, 1e-4)) < 1e-8);

  const PotentialModel x2 = gauge_shift(m, "x2", 2.0);
  const Vec2 before = eval_potential(m, 0.4, 0.9);
  const Vec2 after = eval_potential(x2, 0.4, 0.9);
  CHECK(after.x - before.x == doctest::Approx(4.0 * 0.4));
  CHECK(after.y == doctest::Approx(before.y));

  CHECK_THROWS_AS(gauge_shift(m, "cubic", 1.0), InvalidSpecError);
}

TEST_CASE("stencil leaving the domain is rejected") {
  const Polygon domain = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(numeric_curl(PotentialModel::uniform(1.0), 0.9999, 0.5, 1e-3, &domain),
                  GeometryError);
}

TEST_CASE("sampled sup norm is monotone in density") {
  const Polygon domain = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const PotentialModel m = gauge_shift(PotentialModel::uniform(2.0), "sincos", 0.7);
  const double coarse = sup_norm_sampled(m, domain, 17);
  const double fine = sup_norm_sampled(m, domain, 33);  // contains the coarse lattice
  CHECK(fine >= coarse - 1e-15);
  // The corner is the true max for the uniform part.
  CHECK(sup_norm_sampled(PotentialModel::uniform(2.0), domain, 33) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_SUITE_END();
