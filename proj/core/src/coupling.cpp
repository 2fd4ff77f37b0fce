#include "magnl/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "magnl/errors.hpp"

namespace magnl {

CouplingPair make_coupling(std::shared_ptr<const Mesh> omega,
                           std::shared_ptr<const Mesh> hole_mesh,
                           const PotentialModel& potential, Vec2 center, double eps) {
  if (hole_mesh->parent_node.empty())
    throw InvalidSpecError("hole mesh carries no node map into the domain mesh");
  if (hole_mesh->parent_node.size() != hole_mesh->nodes.size())
    throw InternalError("node map size mismatch");

  CouplingPair cp;
  cp.omega = omega;
  cp.hole = hole_mesh;
  cp.center = center;
  cp.eps = eps;
  cp.omega_form = assemble(omega, potential);
  cp.hole_form = assemble(hole_mesh, potential);
  cp.injective = !hole_mesh->cracked;

  cp.omega_to_hole.assign(omega->nodes.size(), -1);
  for (int i = 0; i < hole_mesh->n_nodes(); ++i) {
    const int p = hole_mesh->parent_node[i];
    if (p < 0 || p >= omega->n_nodes()) throw InternalError("node map out of range");
    const Vec2 a = hole_mesh->nodes[i];
    const Vec2 b = omega->nodes[p];
    if (a.x != b.x || a.y != b.y)
      throw InternalError("node map breaks bit-exact coordinate agreement");
    if (cp.omega_to_hole[p] < 0) cp.omega_to_hole[p] = i;  // primary copy
  }
  return cp;
}

VectorC restrict_to_hole(const CouplingPair& cp, const VectorC& f) {
  if (f.size() != cp.omega_form.n)
    throw InvalidSpecError("field length does not match the domain mesh");
  VectorC out(cp.hole_form.n);
  for (int i = 0; i < cp.hole_form.n; ++i) out[i] = f[cp.hole->parent_node[i]];
  return out;
}

VectorC extend_by_zero(const CouplingPair& cp, const VectorC& u) {
  if (u.size() != cp.hole_form.n)
    throw InvalidSpecError("field length does not match the punctured mesh");
  VectorC out = VectorC::Zero(cp.omega_form.n);
  for (int p = 0; p < cp.omega_form.n; ++p)
    if (cp.omega_to_hole[p] >= 0) out[p] = u[cp.omega_to_hole[p]];
  return out;
}

RadiusChoice choose_radius(const CouplingPair& cp, const VectorC& u, int n_radii, int n_phi) {
  if (!(cp.eps > 0)) throw InvalidSpecError("coupling has no hole ball");
  if (n_radii < 2 || n_phi < 16) throw InvalidSpecError("radius search needs finer sampling");

  RadiusChoice rc;
  rc.radii.reserve(n_radii);
  rc.energies.reserve(n_radii);
  const double dphi = 2.0 * M_PI / n_phi;

  for (int j = 0; j < n_radii; ++j) {
    const double r = cp.eps * (1.0 + static_cast<double>(j + 1) / (n_radii + 1));
    std::vector<Complex> trace(n_phi);
    for (int k = 0; k < n_phi; ++k) {
      const double phi = dphi * k;
      const Vec2 q = cp.center + r * Vec2{std::cos(phi), std::sin(phi)};
      trace[k] = eval_field(*cp.hole, u, q);  // circles in (eps, 2 eps) avoid the hole
    }
    double energy = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      const Complex d =
          (trace[(k + 1) % n_phi] - trace[(k + n_phi - 1) % n_phi]) / (2.0 * dphi);
      energy += std::norm(d) * dphi;
    }
    rc.radii.push_back(r);
    rc.energies.push_back(energy);
  }

  int best = 0;
  for (int j = 1; j < n_radii; ++j)
    if (rc.energies[j] < rc.energies[best]) best = j;
  rc.radius = rc.radii[best];
  rc.angular_energy = rc.energies[best];
  return rc;
}

VectorC extend_radial(const CouplingPair& cp, const VectorC& u, double eps_tilde) {
  if (!(eps_tilde > cp.eps && eps_tilde < 2.0 * cp.eps))
    throw InvalidSpecError("extension radius must lie strictly between eps and 2 eps");

  VectorC out(cp.omega_form.n);
  for (int p = 0; p < cp.omega_form.n; ++p) {
    const Vec2 d = cp.omega->nodes[p] - cp.center;
    const double r = norm(d);
    if (r >= eps_tilde) {
      const int i = cp.omega_to_hole[p];
      if (i < 0) throw InternalError("removed node outside the extension ball");
      out[p] = u[i];
    } else {
      const double phi = std::atan2(d.y, d.x);
      const Vec2 q = cp.center + eps_tilde * Vec2{std::cos(phi), std::sin(phi)};
      out[p] = (r / eps_tilde) * eval_field(*cp.hole, u, q);
    }
  }
  return out;
}

namespace {

VectorC gaussian_bump(const Mesh& mesh, std::mt19937_64& rng) {
  const int n = mesh.n_nodes();
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double bx0 = mesh.nodes[0].x, bx1 = bx0, by0 = mesh.nodes[0].y, by1 = by0;
  for (const Vec2& v : mesh.nodes) {
    bx0 = std::min(bx0, v.x);
    bx1 = std::max(bx1, v.x);
    by0 = std::min(by0, v.y);
    by1 = std::max(by1, v.y);
  }
  const double diam = std::hypot(bx1 - bx0, by1 - by0);

  VectorC out = VectorC::Zero(n);
  for (int b = 0; b < 3; ++b) {
    const Vec2 c = mesh.nodes[pick(rng)];
    const double s = (0.08 + 0.17 * unif(rng)) * diam;
    const double mag = 0.5 + unif(rng);
    const double arg = 2.0 * M_PI * unif(rng);
    const Complex coef = mag * Complex(std::cos(arg), std::sin(arg));
    for (int i = 0; i < n; ++i) {
      const double r2 = std::pow(mesh.nodes[i].x - c.x, 2) + std::pow(mesh.nodes[i].y - c.y, 2);
      out[i] += coef * std::exp(-r2 / (2.0 * s * s));
    }
  }
  return out;
}

}  // namespace

TestSet make_test_set(const CouplingPair& cp, const SpectralResult& omega_modes,
                      const SpectralResult& hole_modes, int n_eigs, int n_bumps,
                      std::uint64_t seed) {
  TestSet ts;
  ts.seed = seed;
  const int ne_omega = std::min<int>(n_eigs, omega_modes.m_achieved);
  const int ne_hole = std::min<int>(n_eigs, hole_modes.m_achieved);
  for (int i = 0; i < ne_omega; ++i) ts.on_omega.push_back(omega_modes.eigenvectors.col(i));
  for (int i = 0; i < ne_hole; ++i) ts.on_hole.push_back(hole_modes.eigenvectors.col(i));

  std::mt19937_64 rng(seed);
  for (int b = 0; b < n_bumps; ++b) ts.on_omega.push_back(gaussian_bump(*cp.omega, rng));
  for (int b = 0; b < n_bumps; ++b) ts.on_hole.push_back(gaussian_bump(*cp.hole, rng));

  ts.description = std::to_string(ne_omega) + "+" + std::to_string(ne_hole) +
                   " eigenvectors, 2x" + std::to_string(n_bumps) + " bumps, seed " +
                   std::to_string(seed);
  return ts;
}

TestSet make_test_set(const CouplingPair& cp, int n_eigs, int n_bumps, std::uint64_t seed) {
  const int mo = std::min(n_eigs, cp.omega_form.n);
  const int mh = std::min(n_eigs, cp.hole_form.n);
  const SpectralResult om = solve_lowest(cp.omega_form, mo, 1e-8);
  const SpectralResult hm = solve_lowest(cp.hole_form, mh, 1e-8);
  return make_test_set(cp, om, hm, n_eigs, n_bumps, seed);
}

ClosenessReport estimate_closeness(const CouplingPair& cp, const TestSet& ts) {
  if (ts.on_omega.empty() || ts.on_hole.empty())
    throw InvalidSpecError("closeness test set is empty");

  const ScaleNorms omega_norms(cp.omega_form);
  const ScaleNorms hole_norms(cp.hole_form);

  struct OmegaEntry {
    const VectorC* f;
    VectorC rf;
    double n0, n1, n2;
  };
  struct HoleEntry {
    const VectorC* u;
    VectorC zero_ext;
    VectorC radial_ext;
    double n0, n1;
    double radius;
  };

  std::vector<OmegaEntry> fs;
  for (const VectorC& f : ts.on_omega) {
    OmegaEntry e{&f, restrict_to_hole(cp, f), omega_norms.norm(f, 0), omega_norms.norm(f, 1),
                 omega_norms.norm(f, 2)};
    if (!(e.n0 > 0)) throw InvalidSpecError("degenerate (zero-norm) domain test function");
    fs.push_back(std::move(e));
  }
  std::vector<HoleEntry> us;
  for (const VectorC& u : ts.on_hole) {
    HoleEntry e;
    e.u = &u;
    e.n0 = hole_norms.norm(u, 0);
    e.n1 = hole_norms.norm(u, 1);
    if (!(e.n0 > 0)) throw InvalidSpecError("degenerate (zero-norm) hole test function");
    e.zero_ext = extend_by_zero(cp, u);
    if (cp.eps > 0) {
      e.radius = choose_radius(cp, u).radius;
      e.radial_ext = extend_radial(cp, u, e.radius);
    } else {
      e.radius = 0.0;
      e.radial_ext = e.zero_ext;  // degenerate no-hole coupling
    }
    us.push_back(std::move(e));
  }

  ClosenessReport rep;
  rep.eps = cp.eps;
  rep.h = cp.omega->h;
  rep.test_description = ts.description;
  rep.seed = ts.seed;
  for (const HoleEntry& e : us) rep.chosen_radii.push_back(e.radius);

  // (1) The two restrictions are one map; the defect is identically zero.
  rep.deltas[0] = 0.0;

  // (2) |(Rf, u)' - (f, Zu)| / (|f|_0 |u|_0).
  double d2 = 0.0;
  for (const OmegaEntry& fe : fs) {
    const VectorC m_rf = apply_mass(cp.hole_form.M, fe.rf);
    for (const HoleEntry& ue : us) {
      const Complex lhs = (ue.u->adjoint() * m_rf)(0);
      const Complex rhs = (ue.zero_ext.adjoint() * apply_mass(cp.omega_form.M, *fe.f))(0);
      d2 = std::max(d2, std::abs(lhs - rhs) / (fe.n0 * ue.n0));
    }
  }
  rep.deltas[1] = d2;

  // (3) Round trip. Exact on injective node maps; measured otherwise.
  if (cp.injective) {
    for (const HoleEntry& ue : us) {
      const VectorC back = restrict_to_hole(cp, ue.zero_ext);
      if ((back - *ue.u).norm() != 0.0)
        throw InternalError("round-trip identity violated on a nested mesh");
    }
    rep.deltas[2] = 0.0;
  } else {
    double d3 = 0.0;
    for (const HoleEntry& ue : us) {
      const VectorC back = restrict_to_hole(cp, ue.zero_ext);
      d3 = std::max(d3, hole_norms.norm(back - *ue.u, 0) / ue.n1);
    }
    rep.deltas[2] = d3;
  }

  // (4) Norm bounds of both maps.
  double d4 = 0.0;
  for (const OmegaEntry& fe : fs)
    d4 = std::max(d4, hole_norms.norm(fe.rf, 0) / fe.n0);
  for (const HoleEntry& ue : us)
    d4 = std::max(d4, omega_norms.norm(ue.zero_ext, 0) / ue.n0);
  rep.deltas[3] = d4;

  // (5') |f - Z R f|_0 / |f|_1: mass of f inside the removed region.
  double d5 = 0.0;
  for (const OmegaEntry& fe : fs) {
    const VectorC diff = *fe.f - extend_by_zero(cp, fe.rf);
    d5 = std::max(d5, omega_norms.norm(diff, 0) / fe.n1);
  }
  rep.deltas[4] = d5;

  // (6) |Zu - radial u|_0 / |u|_1.
  double d6 = 0.0;
  for (const HoleEntry& ue : us)
    d6 = std::max(d6, omega_norms.norm(ue.zero_ext - ue.radial_ext, 0) / ue.n1);
  rep.deltas[5] = d6;

  // (7) |f* K (radial u) - (Rf)* K' u| / (|f|_2 |u|_1).
  double d7 = 0.0;
  for (const OmegaEntry& fe : fs) {
    const VectorC kf_adj = cp.omega_form.K * *fe.f;  // K Hermitian: f* K v = (K f)* v
    for (const HoleEntry& ue : us) {
      const Complex lhs = (kf_adj.adjoint() * ue.radial_ext)(0);
      const Complex rhs = (fe.rf.adjoint() * (cp.hole_form.K * *ue.u))(0);
      d7 = std::max(d7, std::abs(lhs - rhs) / (fe.n2 * ue.n1));
    }
  }
  rep.deltas[6] = d7;

  return rep;
}

double estimate_delta(const CouplingPair& cp, Condition c, const TestSet& ts) {
  return estimate_closeness(cp, ts).delta(c);
}

}  // namespace magnl
