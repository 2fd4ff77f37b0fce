#include "magnl/assembly.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "magnl/errors.hpp"

namespace magnl {

FormPair assemble(std::shared_ptr<const Mesh> mesh, const PotentialModel& potential) {
  const Mesh& m = *mesh;
  const int n = m.n_nodes();

  std::vector<Eigen::Triplet<Complex>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt.reserve(m.tris.size() * 9);
  mt.reserve(m.tris.size() * 9);

  double total_area = 0.0;

  for (int t = 0; t < m.n_tris(); ++t) {
    const auto& tr = m.tris[t];
    const Vec2 a = m.nodes[tr[0]], b = m.nodes[tr[1]], c = m.nodes[tr[2]];
    const double area = 0.5 * cross(b - a, c - a);
    if (!(area > 0))
      throw AssemblyError("degenerate element " + std::to_string(t));
    total_area += area;

    // Constant P1 gradients.
    const double inv = 1.0 / (2.0 * area);
    const Vec2 grad[3] = {
        {(b.y - c.y) * inv, (c.x - b.x) * inv},
        {(c.y - a.y) * inv, (a.x - c.x) * inv},
        {(a.y - b.y) * inv, (b.x - a.x) * inv},
    };

    // Mid-edge quadrature: exact for quadratics.
    const Vec2 quad[3] = {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
    // Basis values at the quadrature points: phi_i vanishes at the midpoint
    // of the opposite edge.
    static const double phi[3][3] = {
        {0.5, 0.5, 0.0},  // at (a+b)/2
        {0.0, 0.5, 0.5},  // at (b+c)/2
        {0.5, 0.0, 0.5},  // at (c+a)/2
    };
    const double w = area / 3.0;

    Complex kloc[3][3] = {};
    double mloc[3][3] = {};
    for (int q = 0; q < 3; ++q) {
      const Vec2 aq = eval_potential(potential, quad[q].x, quad[q].y);
      const double aq2 = dot(aq, aq);
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          const double re = dot(grad[k], grad[j]) + aq2 * phi[q][k] * phi[q][j];
          const double im = dot(aq, phi[q][j] * grad[k] - phi[q][k] * grad[j]);
          kloc[j][k] += w * Complex(re, im);
          mloc[j][k] += w * phi[q][k] * phi[q][j];
        }
      }
    }

    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        kt.emplace_back(tr[j], tr[k], kloc[j][k]);
        mt.emplace_back(tr[j], tr[k], mloc[j][k]);
      }
    }
  }

  FormPair fp;
  fp.n = n;
  fp.mesh = std::move(mesh);
  fp.potential = potential;
  fp.area = total_area;
  fp.K.resize(n, n);
  fp.K.setFromTriplets(kt.begin(), kt.end());
  fp.M.resize(n, n);
  fp.M.setFromTriplets(mt.begin(), mt.end());
  return fp;
}

ScaleNorms::ScaleNorms(const FormPair& fp) : fp_(&fp) {
  mass_.compute(fp.M);
  if (mass_.info() != Eigen::Success)
    throw SolveError("mass matrix factorization failed");
}

VectorC ScaleNorms::mass_solve(const VectorC& b) const {
  Eigen::VectorXd wr = mass_.solve(b.real());
  Eigen::VectorXd wi = mass_.solve(b.imag());
  VectorC w(b.size());
  w.real() = wr;
  w.imag() = wi;
  return w;
}

VectorC apply_mass(const SparseD& m, const VectorC& u) {
  VectorC r(u.size());
  r.real() = m * u.real();
  r.imag() = m * u.imag();
  return r;
}

double mass_inner(const SparseD& m, const VectorC& a, const VectorC& b) {
  return (a.adjoint() * apply_mass(m, b))(0).real();
}

VectorC ScaleNorms::apply_hamiltonian(const VectorC& u) const {
  const VectorC ku = fp_->K * u;
  const VectorC w = mass_solve(ku);
  const double rnorm = (apply_mass(fp_->M, w) - ku).norm();
  if (rnorm > 1e-10 * std::max(ku.norm(), 1e-300))
    throw SolveError("mass solve residual " + std::to_string(rnorm) + " too large");
  return w;
}

double ScaleNorms::norm(const VectorC& u, int k) const {
  switch (k) {
    case 0:
      return std::sqrt(std::max(0.0, mass_inner(fp_->M, u, u)));
    case 1: {
      const double quad =
          (u.adjoint() * (fp_->K * u))(0).real() + mass_inner(fp_->M, u, u);
      return std::sqrt(std::max(0.0, quad));
    }
    case 2: {
      const VectorC w = apply_hamiltonian(u) + u;
      return std::sqrt(std::max(0.0, mass_inner(fp_->M, w, w)));
    }
    default:
      throw InvalidSpecError("scale norm order must be 0, 1 or 2");
  }
}

namespace {

std::array<double, 3> barycentric(const Mesh& m, int t, Vec2 p) {
  const auto& tr = m.tris[t];
  const Vec2 a = m.nodes[tr[0]], b = m.nodes[tr[1]], c = m.nodes[tr[2]];
  const double det = cross(b - a, c - a);
  const double l1 = cross(p - a, c - a) / det;
  const double l2 = cross(b - a, p - a) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

Complex eval_field(const Mesh& mesh, const VectorC& u, Vec2 p) {
  const int t = mesh.locate(p);
  if (t < 0) throw GeometryError("evaluation point outside the mesh");
  const auto lam = barycentric(mesh, t, p);
  const auto& tr = mesh.tris[t];
  return lam[0] * u[tr[0]] + lam[1] * u[tr[1]] + lam[2] * u[tr[2]];
}

Eigen::Vector2cd eval_field_gradient(const Mesh& mesh, const VectorC& u, Vec2 p) {
  const int t = mesh.locate(p);
  if (t < 0) throw GeometryError("evaluation point outside the mesh");
  const auto& tr = mesh.tris[t];
  const Vec2 a = mesh.nodes[tr[0]], b = mesh.nodes[tr[1]], c = mesh.nodes[tr[2]];
  const double inv = 1.0 / cross(b - a, c - a);
  const Vec2 grad[3] = {
      {(b.y - c.y) * inv, (c.x - b.x) * inv},
      {(c.y - a.y) * inv, (a.x - c.x) * inv},
      {(a.y - b.y) * inv, (b.x - a.x) * inv},
  };
  Eigen::Vector2cd g = Eigen::Vector2cd::Zero();
  for (int i = 0; i < 3; ++i) {
    g(0) += grad[i].x * u[tr[i]];
    g(1) += grad[i].y * u[tr[i]];
  }
  return g;
}

RestrictedEnergy restricted_energy(const Mesh& mesh, const VectorC& u,
                                   const std::vector<int>& elements) {
  RestrictedEnergy e;
  for (int t : elements) {
    const auto& tr = mesh.tris[t];
    const Vec2 a = mesh.nodes[tr[0]], b = mesh.nodes[tr[1]], c = mesh.nodes[tr[2]];
    const double area = 0.5 * cross(b - a, c - a);
    const double inv = 1.0 / (2.0 * area);
    const Vec2 grad[3] = {
        {(b.y - c.y) * inv, (c.x - b.x) * inv},
        {(c.y - a.y) * inv, (a.x - c.x) * inv},
        {(a.y - b.y) * inv, (b.x - a.x) * inv},
    };
    Complex gx = 0, gy = 0;
    for (int i = 0; i < 3; ++i) {
      gx += grad[i].x * u[tr[i]];
      gy += grad[i].y * u[tr[i]];
    }
    e.grad += area * (std::norm(gx) + std::norm(gy));
    // Exact P1 mass integral: (area/12) * (|v1+v2+v3|^2 + |v1|^2+|v2|^2+|v3|^2).
    const Complex s = u[tr[0]] + u[tr[1]] + u[tr[2]];
    e.mass += area / 12.0 *
              (std::norm(s) + std::norm(u[tr[0]]) + std::norm(u[tr[1]]) + std::norm(u[tr[2]]));
  }
  return e;
}

std::vector<int> elements_in_ball(const Mesh& mesh, Vec2 c, double r) {
  std::vector<int> out;
  for (int t = 0; t < mesh.n_tris(); ++t)
    if (dist(mesh.centroid(t), c) <= r) out.push_back(t);
  return out;
}

void export_matrices(const FormPair& fp, const std::string& path_stiffness,
                     const std::string& path_mass) {
  std::ofstream ks(path_stiffness);
  for (int col = 0; col < fp.K.outerSize(); ++col)
    for (SparseC::InnerIterator it(fp.K, col); it; ++it) {
      char line[128];
      std::snprintf(line, sizeof line, "%ld %ld %.17g %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value().real(), it.value().imag());
      ks << line;
    }
  std::ofstream ms(path_mass);
  for (int col = 0; col < fp.M.outerSize(); ++col)
    for (SparseD::InnerIterator it(fp.M, col); it; ++it) {
      char line[128];
      std::snprintf(line, sizeof line, "%ld %ld %.17g 0\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      ms << line;
    }
}

}  // namespace magnl
