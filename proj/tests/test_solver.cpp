#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "magnl/errors.hpp"
#include "magnl/solver.hpp"

using namespace magnl;

namespace {

// Separation-of-variables oracle for the zero-field Neumann square.
std::vector<double> neumann_square_oracle(int count) {
  std::vector<double> vals;
  for (int p = 0; p <= 8; ++p)
    for (int q = 0; q <= 8; ++q) vals.push_back(M_PI * M_PI * (p * p + q * q));
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

FormPair square_form(double h, const PotentialModel& field) {
  return assemble(triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), h), field);
}

void check_invariants(const FormPair& fp, const SpectralResult& r, double tol) {
  REQUIRE(r.m_achieved == static_cast<int>(r.eigenvalues.size()));
  CHECK(r.eigenvalues[0] >= -1e-9);
  for (int i = 1; i < r.m_achieved; ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
  for (int i = 0; i < r.m_achieved; ++i)
    CHECK(r.residuals[i] <= tol * (1.0 + r.eigenvalues[i]));
  for (int i = 0; i < r.m_achieved; ++i) {
    for (int j = 0; j < r.m_achieved; ++j) {
      const Complex g =
          (r.eigenvectors.col(i).adjoint() * apply_mass(fp.M, r.eigenvectors.col(j)))(0);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
  }
  // Rayleigh-quotient consistency.
  for (int i = 0; i < r.m_achieved; ++i) {
    const double rq =
        (r.eigenvectors.col(i).adjoint() * (fp.K * r.eigenvectors.col(i)))(0).real();
    CHECK(std::abs(rq - r.eigenvalues[i]) <= 1e-8 * (1.0 + std::abs(r.eigenvalues[i])));
  }
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("one-dimensional pencil") {
  FormPair fp;
  fp.n = 1;
  fp.K.resize(1, 1);
  fp.M.resize(1, 1);
  fp.K.insert(0, 0) = Complex(2.0, 0.0);
  fp.M.insert(0, 0) = 1.0;
  fp.K.makeCompressed();
  fp.M.makeCompressed();
  const SpectralResult r = solve_lowest(fp, 1, 1e-8);
  CHECK(r.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(std::abs(r.eigenvectors(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("zero-field square spectrum against the analytic oracle") {
  const FormPair fp = square_form(1.0 / 32, PotentialModel::uniform(0.0));
  const SpectralResult r = solve_lowest(fp, 6, 1e-8);
  const std::vector<double> exact = neumann_square_oracle(6);
  for (int k = 0; k < 6; ++k) {
    if (exact[k] == 0.0)
      CHECK(std::abs(r.eigenvalues[k]) < 1e-6);
    else
      CHECK(std::abs(r.eigenvalues[k] - exact[k]) / exact[k] < 0.02);
  }
  check_invariants(fp, r, 1e-8);
}

TEST_CASE("iterative and dense paths agree") {
  const FormPair fp = square_form(1.0 / 24, PotentialModel::uniform(1.0));  // n = 625
  SolverOptions dense;
  dense.dense_cutoff = 100000;
  SolverOptions iterative;
  iterative.dense_cutoff = 1;
  const SpectralResult rd = solve_lowest(fp, 6, dense);
  const SpectralResult ri = solve_lowest(fp, 6, iterative);
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(rd.eigenvalues[k] - ri.eigenvalues[k]) <=
          1e-7 * (1.0 + std::abs(rd.eigenvalues[k])));
  check_invariants(fp, ri, iterative.tol);
}

TEST_CASE("mesh refinement improves the square spectrum monotonically") {
  const std::vector<double> exact = neumann_square_oracle(6);
  double prev_err = -1;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const FormPair fp = square_form(h, PotentialModel::uniform(0.0));
    const SpectralResult r = solve_lowest(fp, 6, 1e-9);
    double err = 0;
    for (int k = 0; k < 6; ++k) err = std::max(err, std::abs(r.eigenvalues[k] - exact[k]));
    if (prev_err >= 0) CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("gauge-shifted spectra agree within the discretization error") {
  const PotentialModel base = PotentialModel::uniform(1.0);
  const PotentialModel shifted = gauge_shift(base, "xy", 1.0);
  const FormPair f0 = square_form(1.0 / 16, base);
  const FormPair f1 = square_form(1.0 / 16, shifted);
  const SpectralResult r0 = solve_lowest(f0, 6, 1e-8);
  const SpectralResult r1 = solve_lowest(f1, 6, 1e-8);
  for (int k = 0; k < 6; ++k) {
    const double denom = std::max(1.0, std::abs(r0.eigenvalues[k]));
    CHECK(std::abs(r0.eigenvalues[k] - r1.eigenvalues[k]) / denom < 0.10);
  }
}

TEST_CASE("argument validation") {
  const FormPair fp = square_form(1.0 / 4, PotentialModel::uniform(0.0));  // n = 25
  CHECK_THROWS_AS(solve_lowest(fp, 26, 1e-8), InvalidSpecError);
  CHECK_THROWS_AS(solve_lowest(fp, 0, 1e-8), InvalidSpecError);
  CHECK_THROWS_AS(solve_lowest(fp, 2, 1e-2), InvalidSpecError);
  CHECK_NOTHROW(solve_lowest(fp, 25, 1e-8));  // m = n is fine on the dense path
}

TEST_CASE("iteration cap produces a convergence error carrying residuals") {
  const FormPair fp = square_form(1.0 / 40, PotentialModel::uniform(1.0));  // n = 1681
  SolverOptions opts;
  opts.dense_cutoff = 1;
  opts.max_iterations = 1;
  opts.tol = 1e-11;
  try {
    solve_lowest(fp, 6, opts);
    FAIL("expected SolveError");
  } catch (const SolveError& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_SUITE_END();
