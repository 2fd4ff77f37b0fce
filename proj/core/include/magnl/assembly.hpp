#ifndef MAGNL_ASSEMBLY_HPP
#define MAGNL_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <complex>
#include <memory>

#include "magnl/geometry.hpp"
#include "magnl/potential.hpp"

namespace magnl {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;
using SparseD = Eigen::SparseMatrix<double>;
using VectorC = Eigen::VectorXcd;

/// Discrete magnetic Neumann form on one mesh: Hermitian PSD stiffness K for
/// the form integral of |i grad(u) + A u|^2 and the consistent SPD mass M.
/// P1 elements; element integrals use the mid-edge three-point rule with the
/// potential frozen at the quadrature points, which keeps K Hermitian and PSD
/// exactly. No boundary condition is imposed anywhere.
struct FormPair {
  SparseC K;
  SparseD M;
  int n = 0;
  std::shared_ptr<const Mesh> mesh;
  PotentialModel potential;
  double area = 0.0;  // sum of element areas
};

FormPair assemble(std::shared_ptr<const Mesh> mesh, const PotentialModel& potential);

/// Sobolev-scale norms over a FormPair:
///   k=0: (u* M u)^{1/2}
///   k=1: (u* (K+M) u)^{1/2}
///   k=2: |(H+1)u|_0 with H u the mass solve of K u.
/// Holds the mass factorization; the FormPair must outlive this object.
class ScaleNorms {
 public:
  explicit ScaleNorms(const FormPair& fp);

  /// Solves M w = K u; verifies the residual is below 1e-10 * |K u|.
  VectorC apply_hamiltonian(const VectorC& u) const;

  double norm(const VectorC& u, int k) const;

  const FormPair& form() const { return *fp_; }

  /// Solves M w = b (used by eigensolver residual norms as well).
  VectorC mass_solve(const VectorC& b) const;

 private:
  const FormPair* fp_;
  Eigen::SimplicialLLT<SparseD> mass_;
};

/// Real-sparse times complex-dense product (Eigen has no mixed kernel).
VectorC apply_mass(const SparseD& m, const VectorC& u);

/// Real part of a* M b.
double mass_inner(const SparseD& m, const VectorC& a, const VectorC& b);

/// P1 evaluation of a nodal field at a point (throws GeometryError when the
/// point lies outside the mesh).
Complex eval_field(const Mesh& mesh, const VectorC& u, Vec2 p);

/// Gradient of the P1 field in the triangle containing p.
Eigen::Vector2cd eval_field_gradient(const Mesh& mesh, const VectorC& u, Vec2 p);

/// Element-restricted energies: sum over the given elements of the exact P1
/// integrals of |grad u|^2 and |u|^2.
struct RestrictedEnergy {
  double grad = 0.0;
  double mass = 0.0;
};
RestrictedEnergy restricted_energy(const Mesh& mesh, const VectorC& u,
                                   const std::vector<int>& elements);

/// Elements whose centroid lies within distance r of c (ordered by id).
std::vector<int> elements_in_ball(const Mesh& mesh, Vec2 c, double r);

/// Writes K and M in coordinate text format (row col re im per line).
void export_matrices(const FormPair& fp, const std::string& path_stiffness,
                     const std::string& path_mass);

}  // namespace magnl

#endif  // MAGNL_ASSEMBLY_HPP
