#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "magnl/errors.hpp"
#include "magnl/spectra.hpp"

using namespace magnl;

TEST_SUITE_BEGIN("spectra");

TEST_CASE("hausdorff distance on the worked examples") {
  CHECK(hausdorff({0, 1}, {0, 1}) == 0.0);
  CHECK(hausdorff({0}, {1}) == 1.0);
  // Enumerating all point distances: d(0,{1})=1, d(2,{1})=1, d(1,{0,2})=1.
  CHECK(hausdorff({0, 2}, {1}) == 1.0);
  CHECK_THROWS_AS(hausdorff({}, {1.0}), InvalidSpecError);
}

TEST_CASE("hausdorff is symmetric and satisfies the triangle inequality") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 10.0);
  std::uniform_int_distribution<int> size(1, 6);
  auto random_set = [&] {
    std::vector<double> s(size(rng));
    for (double& v : s) v = unif(rng);
    return s;
  };
  for (int rep = 0; rep < 50; ++rep) {
    const auto a = random_set(), b = random_set(), c = random_set();
    const double ab = hausdorff(a, b);
    CHECK(ab == hausdorff(b, a));
    CHECK(ab <= hausdorff(a, c) + hausdorff(c, b) + 1e-12);
  }
}

TEST_CASE("resolvent distance on the worked examples") {
  SpectrumSet s1;
  s1.values = {0.0};
  s1.tail = 1e-4;
  SpectrumSet s2;
  s2.values = {1.0};
  s2.tail = 1e-4;
  const DbarDistance d = dbar(s1, s2);
  CHECK(std::abs(d.value - 0.5) <= 1e-3);
  CHECK(d.truncation_error == doctest::Approx(1e-4));

  SpectrumSet a;
  a.values = {0.0, M_PI * M_PI};
  a.tail = 1e-12;
  SpectrumSet b;
  b.values = {0.0, M_PI * M_PI + 0.1};
  b.tail = 1e-12;
  const double expected = 1.0 / (M_PI * M_PI + 1.0) - 1.0 / (M_PI * M_PI + 1.1);
  CHECK(dbar(a, b).value == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("resolvent distance vanishes on identical spectra") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 50.0);
  for (int rep = 0; rep < 20; ++rep) {
    SpectrumSet s;
    for (int i = 0; i < 5; ++i) s.values.push_back(unif(rng));
    std::sort(s.values.begin(), s.values.end());
    s.tail = 0.01;
    CHECK(dbar(s, s).value == 0.0);
  }
}

TEST_CASE("appending eigenvalues beyond the truncation threshold is invisible") {
  SpectrumSet a;
  a.values = {0.0, 2.0, 10.0};
  a.tail = 1.0 / (1.0 + 60.0);
  SpectrumSet b = a;
  b.values.push_back(80.0);  // lands inside the tail interval
  const DbarDistance base = dbar(a, a);
  const DbarDistance bumped = dbar(a, b);
  CHECK(bumped.value <= base.value + bumped.truncation_error);
}

TEST_CASE("clamping and tail invariants") {
  const SpectrumSet s = SpectrumSet::from_values({-1e-12, 3.0}, 50.0);
  CHECK(s.values[0] == 0.0);
  CHECK(s.tail == doctest::Approx(1.0 / 51.0));
  CHECK_THROWS_AS(SpectrumSet::from_values({-1.0}, 10.0), InvalidSpecError);
}

TEST_CASE("eigenvalue matching on the worked examples") {
  const MatchReport perfect = match_eigenvalues({1, 2, 3}, {1, 2, 3}, 10.0);
  CHECK(perfect.pairs.size() == 3);
  CHECK(perfect.unpaired_a.empty());
  CHECK(perfect.unpaired_b.empty());

  const MatchReport near = match_eigenvalues({0, 9.8}, {0, 9.9}, 0.2);
  REQUIRE(near.pairs.size() == 2);
  CHECK(near.pairs[0].gap == doctest::Approx(0.0));
  CHECK(near.pairs[1].gap == doctest::Approx(0.1));

  const MatchReport pollution = match_eigenvalues({0}, {0, 5}, 0.1);
  CHECK(pollution.pairs.size() == 1);
  REQUIRE(pollution.unpaired_b.size() == 1);
  CHECK(pollution.unpaired_b[0] == 1);
}

TEST_CASE("matching is injective with gaps within eta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 20.0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> a(6), b(4);
    for (double& v : a) v = unif(rng);
    for (double& v : b) v = unif(rng);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const MatchReport rep_m = match_eigenvalues(a, b, 1.5);
    std::set<int> ia, ib;
    for (const MatchPair& p : rep_m.pairs) {
      CHECK(p.gap <= 1.5);
      CHECK(ia.insert(p.index_a).second);
      CHECK(ib.insert(p.index_b).second);
    }
    CHECK(rep_m.pairs.size() + rep_m.unpaired_a.size() == a.size());
    CHECK(rep_m.pairs.size() + rep_m.unpaired_b.size() == b.size());
  }
}

TEST_SUITE_END();
