#include "magnl/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "magnl/errors.hpp"

namespace magnl {

namespace {

// Residual norms |K x - lambda M x|_{M^{-1}} for the first m columns.
std::vector<double> residual_norms(const SparseC& k, const SparseC& mc,
                                   const Eigen::SimplicialLLT<SparseD>& mass,
                                   const Eigen::MatrixXcd& x, const std::vector<double>& lam,
                                   int m) {
  std::vector<double> res(m);
  for (int i = 0; i < m; ++i) {
    const VectorC r = k * x.col(i) - lam[i] * (mc * x.col(i));
    Eigen::VectorXd sr = mass.solve(r.real());
    Eigen::VectorXd si = mass.solve(r.imag());
    const double v = r.real().dot(sr) + r.imag().dot(si);
    res[i] = std::sqrt(std::max(0.0, v));
  }
  return res;
}

SpectralResult solve_dense(const FormPair& fp, const SparseC& mc, int m) {
  const Eigen::MatrixXcd kd(fp.K);
  const Eigen::MatrixXcd md(mc);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(kd, md);
  if (ges.info() != Eigen::Success) throw SolveError("dense generalized eigensolver failed");

  SpectralResult out;
  out.m_requested = m;
  out.m_achieved = m;
  out.h = fp.mesh ? fp.mesh->h : 0.0;
  out.eigenvalues.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + m);
  out.eigenvectors = ges.eigenvectors().leftCols(m);

  Eigen::SimplicialLLT<SparseD> mass(fp.M);
  if (mass.info() != Eigen::Success) throw SolveError("mass factorization failed");
  out.residuals = residual_norms(fp.K, mc, mass, out.eigenvectors, out.eigenvalues, m);
  return out;
}

// M-orthonormalizes the columns of x in place. Cholesky of the Gram matrix
// with an eigendecomposition fallback for near-rank-deficient blocks.
void m_orthonormalize(const SparseC& mc, Eigen::MatrixXcd& x) {
  const Eigen::MatrixXcd g = x.adjoint() * (mc * x);
  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXcd xad = x.adjoint();
    llt.matrixL().solveInPlace(xad);  // xad = L^{-1} x^H, so x becomes x L^{-H}
    x = xad.adjoint();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  Eigen::VectorXd d = es.eigenvalues();
  const Eigen::MatrixXcd q = es.eigenvectors();
  const double floor = std::max(1e-14 * d.maxCoeff(), 1e-300);
  for (int i = 0; i < d.size(); ++i) d(i) = 1.0 / std::sqrt(std::max(d(i), floor));
  x = x * q * d.asDiagonal() * q.adjoint();
}

SpectralResult solve_iterative(const FormPair& fp, const SparseC& mc, int m,
                               const SolverOptions& opts) {
  const int n = fp.n;
  const double sigma = opts.shift;

  const SparseC shifted = fp.K - Complex(sigma, 0.0) * mc;
  Eigen::SimplicialLDLT<SparseC> fact(shifted);
  if (fact.info() != Eigen::Success)
    throw SolveError("shifted operator factorization failed");
  Eigen::SimplicialLLT<SparseD> mass(fp.M);
  if (mass.info() != Eigen::Success) throw SolveError("mass factorization failed");

  const int p = std::min(n, std::max(2 * m, m + 8));

  // Fixed-seed start block: solves are reproducible run to run.
  std::mt19937_64 rng(0x6d61676e6cULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd x(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = Complex(gauss(rng), gauss(rng));

  m_orthonormalize(mc, x);

  std::vector<double> lam(p, 0.0);
  std::vector<double> res;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // Power step on (K - sigma M)^{-1} M.
    Eigen::MatrixXcd y = fact.solve(mc * x);
    m_orthonormalize(mc, y);

    // Rayleigh-Ritz on the original pencil.
    const Eigen::MatrixXcd hp = y.adjoint() * (fp.K * y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (hp + hp.adjoint()));
    if (es.info() != Eigen::Success) throw SolveError("projected eigensolver failed");
    x = y * es.eigenvectors();
    for (int j = 0; j < p; ++j) lam[j] = es.eigenvalues()(j);

    res = residual_norms(fp.K, mc, mass, x, lam, m);
    bool done = true;
    for (int i = 0; i < m; ++i)
      if (res[i] > opts.tol * (1.0 + std::abs(lam[i]))) done = false;
    if (done) {
      SpectralResult out;
      out.m_requested = m;
      out.m_achieved = m;
      out.h = fp.mesh ? fp.mesh->h : 0.0;
      out.eigenvalues.assign(lam.begin(), lam.begin() + m);
      out.eigenvectors = x.leftCols(m);
      out.residuals = res;
      return out;
    }
  }

  std::string msg = "eigensolver did not converge; residuals:";
  for (int i = 0; i < m; ++i) msg += " " + std::to_string(res[i]);
  throw SolveError(msg);
}

}  // namespace

SpectralResult solve_lowest(const FormPair& fp, int m, const SolverOptions& opts) {
  if (m <= 0) throw InvalidSpecError("eigenpair count must be positive");
  if (m > fp.n)
    throw InvalidSpecError("requested " + std::to_string(m) + " eigenpairs from a " +
                           std::to_string(fp.n) + "-dimensional problem");
  if (!(opts.tol > 1e-12 && opts.tol < 1e-4))
    throw InvalidSpecError("eigensolver tolerance must lie in (1e-12, 1e-4)");

  const SparseC mc = fp.M.cast<Complex>();
  if (fp.n <= opts.dense_cutoff || std::max(2 * m, m + 8) >= fp.n)
    return solve_dense(fp, mc, m);
  return solve_iterative(fp, mc, m, opts);
}

SpectralResult solve_lowest(const FormPair& fp, int m, double tol) {
  SolverOptions opts;
  opts.tol = tol;
  return solve_lowest(fp, m, opts);
}

}  // namespace magnl
