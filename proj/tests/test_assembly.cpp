#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "magnl/assembly.hpp"
#include "magnl/errors.hpp"
#include "magnl/solver.hpp"

using namespace magnl;

namespace {

std::shared_ptr<Mesh> single_triangle(Vec2 a, Vec2 b, Vec2 c) {
  auto mesh = std::make_shared<Mesh>();
  mesh->nodes = {a, b, c};
  mesh->tris = {{0, 1, 2}};
  mesh->h = 1.0;
  return mesh;
}

VectorC random_complex(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorC v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  return v;
}

double hermiticity_defect(const SparseC& k) {
  const Eigen::MatrixXcd kd(k);
  const double num = (kd - kd.adjoint()).cwiseAbs().maxCoeff();
  const double den = kd.cwiseAbs().maxCoeff();
  return num / den;
}

}  // namespace

TEST_SUITE_BEGIN("assembly");

TEST_CASE("zero-field local stiffness on the unit right triangle") {
  // Hand integration of P1 gradients: diag (1, 1/2, 1/2), off-diagonals -1/2
  // towards the right-angle vertex and 0 between the legs.
  const FormPair fp = assemble(single_triangle({0, 0}, {1, 0}, {0, 1}),
                               PotentialModel::uniform(0.0));
  const Eigen::MatrixXcd k(fp.K);
  CHECK(k(0, 0).real() == doctest::Approx(1.0));
  CHECK(k(1, 1).real() == doctest::Approx(0.5));
  CHECK(k(2, 2).real() == doctest::Approx(0.5));
  CHECK(k(0, 1).real() == doctest::Approx(-0.5));
  CHECK(k(0, 2).real() == doctest::Approx(-0.5));
  CHECK(k(1, 2).real() == doctest::Approx(0.0));
  CHECK(k.imag().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("mass matrix integrates the partition of unity to the area") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 8);
  const FormPair fp = assemble(mesh, PotentialModel::uniform(1.0));
  double sum = 0;
  for (int col = 0; col < fp.M.outerSize(); ++col)
    for (SparseD::InnerIterator it(fp.M, col); it; ++it) sum += it.value();
  CHECK(std::abs(sum - 1.0) < 1e-10);
  CHECK(fp.area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constants are in the kernel of the zero-field form") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 8);
  const FormPair fp = assemble(mesh, PotentialModel::uniform(0.0));
  const VectorC ones = VectorC::Ones(fp.n);
  CHECK(std::abs((ones.adjoint() * (fp.K * ones))(0)) < 1e-12);
}

TEST_CASE("magnetic form is Hermitian and positive semidefinite") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 12);
  for (double b0 : {1.0, 5.0}) {
    const FormPair fp =
        assemble(mesh, gauge_shift(PotentialModel::uniform(b0), "sincos", 0.3));
    CHECK(hermiticity_defect(fp.K) < 1e-12);
    for (int s = 0; s < 20; ++s) {
      const VectorC z = random_complex(fp.n, 100 + s);
      CHECK((z.adjoint() * (fp.K * z))(0).real() > -1e-9);
    }
    const SpectralResult r = solve_lowest(fp, 1, 1e-8);
    CHECK(r.eigenvalues[0] >= -1e-9);
  }
}

TEST_CASE("degenerate element is reported by index") {
  auto mesh = single_triangle({0, 0}, {1, 0}, {2, 0});
  try {
    assemble(mesh, PotentialModel::uniform(0.0));
    FAIL("expected AssemblyError");
  } catch (const AssemblyError& e) {
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}

TEST_CASE("hamiltonian application matches the eigenpair definition") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 10);
  const FormPair fp = assemble(mesh, PotentialModel::uniform(1.0));
  const ScaleNorms norms(fp);

  const SpectralResult r = solve_lowest(fp, 3, 1e-9);
  for (int i = 0; i < 3; ++i) {
    const VectorC u = r.eigenvectors.col(i);
    const VectorC w = norms.apply_hamiltonian(u);
    CHECK((w - r.eigenvalues[i] * u).norm() < 1e-6 * (1.0 + r.eigenvalues[i]));
  }

  const VectorC zero = VectorC::Zero(fp.n);
  CHECK(norms.apply_hamiltonian(zero).norm() == 0.0);

  // Discrete self-adjointness: u* M (H u) = u* K u.
  for (int s = 0; s < 10; ++s) {
    const VectorC u = random_complex(fp.n, 500 + s);
    const VectorC w = norms.apply_hamiltonian(u);
    const double lhs = mass_inner(fp.M, u, w);
    const double rhs = (u.adjoint() * (fp.K * u))(0).real();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("scale norms satisfy the spectral calculus relations") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 10);
  const FormPair fp = assemble(mesh, PotentialModel::uniform(1.0));
  const ScaleNorms norms(fp);

  const VectorC zero = VectorC::Zero(fp.n);
  for (int k : {0, 1, 2}) CHECK(norms.norm(zero, k) == 0.0);

  const SpectralResult r = solve_lowest(fp, 4, 1e-9);
  for (int i = 0; i < 4; ++i) {
    const VectorC u = r.eigenvectors.col(i);
    const double lam = r.eigenvalues[i];
    CHECK(norms.norm(u, 0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(norms.norm(u, 1) == doctest::Approx(std::sqrt(1.0 + lam)).epsilon(1e-6));
    CHECK(norms.norm(u, 2) == doctest::Approx(1.0 + lam).epsilon(1e-6));
  }

  // Norm ladder: |u|_0 <= |u|_1 always; |u|_1 <= |u|_2 on the computed span.
  for (int s = 0; s < 100; ++s) {
    const VectorC u = random_complex(fp.n, 900 + s);
    CHECK(norms.norm(u, 0) <= norms.norm(u, 1) * (1 + 1e-12));
  }
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    VectorC u = VectorC::Zero(fp.n);
    for (int i = 0; i < 4; ++i)
      u += Complex(gauss(rng), gauss(rng)) * r.eigenvectors.col(i);
    CHECK(norms.norm(u, 1) <= norms.norm(u, 2) * (1 + 1e-9));
  }
}

TEST_CASE("shifted-energy inequality holds at matrix level") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 10);
  const FormPair fp = assemble(mesh, gauge_shift(PotentialModel::uniform(2.0), "xy", 0.5));
  const ScaleNorms norms(fp);
  for (int s = 0; s < 50; ++s) {
    const VectorC u = random_complex(fp.n, 1300 + s);
    const VectorC hu = norms.apply_hamiltonian(u);
    const VectorC w = hu + u;
    const double lhs = mass_inner(fp.M, w, w);
    const double rhs = mass_inner(fp.M, hu, hu) + mass_inner(fp.M, u, u);
    CHECK(lhs >= rhs - 1e-12 * std::max(lhs, rhs));
  }
}

TEST_CASE("element removal can only lower the quadratic forms") {
  const auto omega = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 16);
  const auto holed = carve_hole(omega, build_hole(HoleSpec::disk({0.5, 0.5}, 0.15)));
  const PotentialModel field = PotentialModel::uniform(1.0);
  const FormPair fo = assemble(omega, field);
  const FormPair fh = assemble(holed, field);

  for (int s = 0; s < 10; ++s) {
    const VectorC f = random_complex(fo.n, 2000 + s);
    VectorC rf(fh.n);
    for (int i = 0; i < fh.n; ++i) rf[i] = f[holed->parent_node[i]];
    const double k_omega = (f.adjoint() * (fo.K * f))(0).real();
    const double k_hole = (rf.adjoint() * (fh.K * rf))(0).real();
    CHECK(k_hole <= k_omega * (1 + 1e-12));
    CHECK(mass_inner(fh.M, rf, rf) <= mass_inner(fo.M, f, f) * (1 + 1e-12));
  }
}

TEST_CASE("field evaluation reproduces P1 interpolation") {
  const auto mesh = triangulate_domain(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 8);
  VectorC u(mesh->n_nodes());
  for (int i = 0; i < mesh->n_nodes(); ++i)
    u[i] = Complex(mesh->nodes[i].x, 2.0 * mesh->nodes[i].y);  // linear, exactly in P1
  const Complex v = eval_field(*mesh, u, {0.37, 0.81});
  CHECK(v.real() == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(1.62).epsilon(1e-12));
  const Eigen::Vector2cd g = eval_field_gradient(*mesh, u, {0.37, 0.81});
  CHECK(g(0).real() == doctest::Approx(1.0));
  CHECK(g(1).imag() == doctest::Approx(2.0));
  CHECK_THROWS_AS(eval_field(*mesh, u, {2.0, 2.0}), GeometryError);
}

TEST_SUITE_END();
