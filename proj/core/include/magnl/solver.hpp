#ifndef MAGNL_SOLVER_HPP
#define MAGNL_SOLVER_HPP

#include <vector>

#include "magnl/assembly.hpp"

namespace magnl {

/// Lowest eigenpairs of K x = lambda M x.
struct SpectralResult {
  std::vector<double> eigenvalues;  // ascending, repeated by multiplicity
  Eigen::MatrixXcd eigenvectors;    // n x m, M-orthonormal columns
  std::vector<double> residuals;    // |K x - lambda M x| in the M^{-1} norm
  double h = 0.0;
  int m_requested = 0;
  int m_achieved = 0;
};

struct SolverOptions {
  double tol = 1e-8;
  double shift = -0.5;   // below the PSD spectrum
  int max_iterations = 400;
  int dense_cutoff = 1200;  // dense reduction up to this size
};

/// Solves for the m lowest eigenpairs. Dense Cholesky reduction for small
/// problems, shift-invert subspace iteration with a sparse Hermitian
/// factorization otherwise. Deterministic: identical inputs give identical
/// results regardless of ambient threading.
SpectralResult solve_lowest(const FormPair& fp, int m, const SolverOptions& opts = {});

SpectralResult solve_lowest(const FormPair& fp, int m, double tol);

}  // namespace magnl

#endif  // MAGNL_SOLVER_HPP
