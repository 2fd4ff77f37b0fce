#include "magnl/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "magnl/errors.hpp"

namespace magnl {

namespace {

std::string label(const char* what, int i, double eps = -1.0) {
  char buf[96];
  if (eps >= 0)
    std::snprintf(buf, sizeof buf, "%s[%d] eps=%.6g", what, i, eps);
  else
    std::snprintf(buf, sizeof buf, "%s[%d]", what, i);
  return buf;
}

// Bounded-constant rule for inequalities without an explicit constant:
// no implied value may exceed three times the median of the positive ones.
bool bounded_within_factor_three(std::vector<LemmaSample>& samples) {
  std::vector<double> positive;
  for (const LemmaSample& s : samples)
    if (s.implied > 0) positive.push_back(s.implied);
  if (positive.empty()) {
    for (LemmaSample& s : samples) s.pass = true;
    return true;
  }
  std::sort(positive.begin(), positive.end());
  const double median = positive[positive.size() / 2];
  bool all = true;
  for (LemmaSample& s : samples) {
    s.pass = s.implied <= 3.0 * median;
    all = all && s.pass;
  }
  return all;
}

}  // namespace

LemmaReport verify_energy_shift(const FormPair& fp, const std::vector<VectorC>& samples) {
  const ScaleNorms norms(fp);
  LemmaReport rep;
  rep.lemma = "energy-shift";
  rep.note = "|(H+1)z|^2 >= |Hz|^2 + |z|^2, exact up to rounding";
  int i = 0;
  for (const VectorC& z : samples) {
    LemmaSample s;
    s.label = label("z", i++);
    if (z.norm() == 0.0) {
      s.lhs = s.rhs = 0.0;
      s.implied = 1.0;
      s.pass = true;
      rep.samples.push_back(s);
      continue;
    }
    const VectorC hz = norms.apply_hamiltonian(z);
    const VectorC w = hz + z;
    s.lhs = mass_inner(fp.M, w, w);
    s.rhs = mass_inner(fp.M, hz, hz) + mass_inner(fp.M, z, z);
    s.implied = s.rhs > 0 ? s.lhs / s.rhs : 1.0;
    s.pass = s.lhs >= s.rhs - 1e-12 * std::max(s.lhs, s.rhs);
    rep.pass = rep.pass && s.pass;
    rep.samples.push_back(s);
  }
  return rep;
}

LemmaReport verify_field_comparison(const FormPair& magnetic, const FormPair& plain,
                                    double field_sup, const std::vector<VectorC>& samples) {
  if (magnetic.n != plain.n)
    throw InvalidSpecError("comparison forms live on different meshes");
  const double c3 = std::max(2.0, 4.0 * field_sup * field_sup + 1.0);

  LemmaReport rep;
  rep.lemma = "field-comparison";
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, "explicit constant C3 = max(2, 4 sup|A|^2 + 1) = %.6g", c3);
    rep.note = buf;
  }
  int i = 0;
  for (const VectorC& v : samples) {
    LemmaSample s;
    s.label = label("v", i++);
    const double plain_energy =
        (v.adjoint() * (plain.K * v))(0).real() + mass_inner(plain.M, v, v);
    const double magnetic_energy =
        (v.adjoint() * (magnetic.K * v))(0).real() + mass_inner(magnetic.M, v, v);
    s.lhs = plain_energy;
    s.rhs = magnetic_energy;
    s.implied = magnetic_energy > 0 ? plain_energy / magnetic_energy : 0.0;
    s.pass = plain_energy <= c3 * magnetic_energy * (1.0 + 1e-12);
    rep.pass = rep.pass && s.pass;
    rep.samples.push_back(s);
  }
  return rep;
}

std::vector<LemmaReport> verify_ball_bounds(const std::vector<BallCase>& cases) {
  LemmaReport mass_rep, grad_rep, value_rep;
  mass_rep.lemma = "ball-mass";
  mass_rep.note = "int_{B_r} |u|^2 <= C1 eps (form energy of u); implied C1 per sample";
  grad_rep.lemma = "ball-gradient";
  grad_rep.note = "int_{B_r} |grad g|^2 <= C5 r^{4/3} |(H+1)g|^2; implied C5 per sample";
  value_rep.lemma = "ball-value";
  value_rep.note = "int_{B_r} |g|^2 <= C6 r^{4/3} |(H+1)g|^2; implied C6 per sample";

  for (const BallCase& c : cases) {
    if (!c.cp || !c.omega_modes || !c.hole_modes)
      throw InvalidSpecError("incomplete ball-bound case");
    const CouplingPair& cp = *c.cp;
    const double r = c.radius > 0 ? c.radius : 1.5 * c.eps;

    const std::vector<int> hole_ball = elements_in_ball(*cp.hole, cp.center, r);
    const std::vector<int> omega_ball = elements_in_ball(*cp.omega, cp.center, r);
    if (omega_ball.empty())
      throw ResolutionError("ball of radius " + std::to_string(r) + " contains no elements");

    const ScaleNorms hole_norms(cp.hole_form);
    for (int i = 0; i < c.hole_modes->m_achieved; ++i) {
      const VectorC u = c.hole_modes->eigenvectors.col(i);
      LemmaSample s;
      s.label = label("u", i, c.eps);
      s.lhs = restricted_energy(*cp.hole, u, hole_ball).mass;
      const double n1 = hole_norms.norm(u, 1);
      s.rhs = c.eps * n1 * n1;
      s.implied = s.rhs > 0 ? s.lhs / s.rhs : 0.0;
      mass_rep.samples.push_back(s);
    }

    const ScaleNorms omega_norms(cp.omega_form);
    const double r43 = std::pow(r, 4.0 / 3.0);
    for (int i = 0; i < c.omega_modes->m_achieved; ++i) {
      const VectorC g = c.omega_modes->eigenvectors.col(i);
      const RestrictedEnergy e = restricted_energy(*cp.omega, g, omega_ball);
      const double n2 = omega_norms.norm(g, 2);
      const double rhs = r43 * n2 * n2;

      LemmaSample sg;
      sg.label = label("g", i, c.eps);
      sg.lhs = e.grad;
      sg.rhs = rhs;
      sg.implied = rhs > 0 ? e.grad / rhs : 0.0;
      grad_rep.samples.push_back(sg);

      LemmaSample sv = sg;
      sv.lhs = e.mass;
      sv.implied = rhs > 0 ? e.mass / rhs : 0.0;
      value_rep.samples.push_back(sv);
    }
  }

  mass_rep.pass = bounded_within_factor_three(mass_rep.samples);
  grad_rep.pass = bounded_within_factor_three(grad_rep.samples);
  value_rep.pass = bounded_within_factor_three(value_rep.samples);
  return {mass_rep, grad_rep, value_rep};
}

LemmaReport verify_trace_bound(const std::vector<BallCase>& cases, int n_phi) {
  if (n_phi < 64) throw InvalidSpecError("circle trace needs at least 64 angle samples");
  LemmaReport rep;
  rep.lemma = "circle-trace";
  rep.note = "int_{dB_r} |v|^2 <= C2 int_{outside} (|grad v|^2 + |v|^2); implied C2 per sample";

  for (const BallCase& c : cases) {
    const CouplingPair& cp = *c.cp;
    const double r = c.radius > 0 ? c.radius : 1.5 * c.eps;
    const double dphi = 2.0 * M_PI / n_phi;

    std::vector<int> outside;
    for (int t = 0; t < cp.hole->n_tris(); ++t)
      if (dist(cp.hole->centroid(t), cp.center) > r) outside.push_back(t);

    for (int i = 0; i < c.hole_modes->m_achieved; ++i) {
      const VectorC v = c.hole_modes->eigenvectors.col(i);
      double trace = 0.0;
      for (int k = 0; k < n_phi; ++k) {
        const double phi = dphi * k;
        const Vec2 q = cp.center + r * Vec2{std::cos(phi), std::sin(phi)};
        const int t = cp.hole->locate(q);
        if (t < 0) throw GeometryError("trace circle leaves the mesh");
        trace += std::norm(eval_field(*cp.hole, v, q));
      }
      trace *= r * dphi;

      const RestrictedEnergy e = restricted_energy(*cp.hole, v, outside);
      LemmaSample s;
      s.label = label("v", i, c.eps);
      s.lhs = trace;
      s.rhs = e.grad + e.mass;
      s.implied = s.rhs > 0 ? s.lhs / s.rhs : 0.0;
      rep.samples.push_back(s);
    }
  }

  rep.pass = bounded_within_factor_three(rep.samples);
  return rep;
}

LemmaReport verify_line_bound(const Mesh& hole_mesh, const Polygon& domain,
                              const std::vector<Vec2>& points, const VectorC& u) {
  LemmaReport rep;
  rep.lemma = "half-line-pointwise";
  rep.note = "|u(p)|^2 <= C8^2 (line integrals), C8^2 = max(2/dist, 2 diam); 10% slack";

  const auto obstacles = hole_mesh.hole_edge_segments();
  const double diam = polygon_diameter(domain);

  double bx0 = domain[0].x, bx1 = bx0, by0 = domain[0].y, by1 = by0;
  for (const Vec2& v : domain) {
    bx0 = std::min(bx0, v.x);
    bx1 = std::max(bx1, v.x);
    by0 = std::min(by0, v.y);
    by1 = std::max(by1, v.y);
  }
  const double margin = 1.0 + std::max(bx1 - bx0, by1 - by0);

  int idx = 0;
  for (const Vec2& p : points) {
    const std::array<Vec2, 4> dirs = {Vec2{0, 1}, Vec2{0, -1}, Vec2{-1, 0}, Vec2{1, 0}};
    int free_dir = -1;
    for (int d = 0; d < 4; ++d) {
      const Vec2 far = p + (2.0 * margin) * dirs[d];
      bool blocked = false;
      for (const auto& seg : obstacles)
        if (segments_intersect(p, far, seg[0], seg[1])) {
          blocked = true;
          break;
        }
      if (!blocked) {
        free_dir = d;
        break;
      }
    }
    if (free_dir < 0)
      throw PropertyStarViolation("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                  ") has no obstacle-free axis half-line");

    const Vec2 dir = dirs[free_dir];
    auto dir_deriv2 = [&](Vec2 q) {
      const Eigen::Vector2cd g = eval_field_gradient(hole_mesh, u, q);
      return std::norm(g(0) * dir.x + g(1) * dir.y);
    };
    // March along the half-line while the mesh can evaluate the field.
    const double step = 0.5 * hole_mesh.h;
    const double value2 = std::norm(eval_field(hole_mesh, u, p));
    double int_mass = 0.0, int_grad = 0.0;
    double prev_mass = value2;
    double prev_grad = dir_deriv2(p);
    for (int k = 1;; ++k) {
      const Vec2 q = p + (k * step) * dir;
      if (hole_mesh.locate(q) < 0) break;
      const double m = std::norm(eval_field(hole_mesh, u, q));
      const double g = dir_deriv2(q);
      int_mass += 0.5 * (prev_mass + m) * step;
      int_grad += 0.5 * (prev_grad + g) * step;
      prev_mass = m;
      prev_grad = g;
    }

    const double d_boundary = dist_to_polygon_boundary(p, domain);
    const double c8sq = std::max(2.0 / d_boundary, 2.0 * diam);

    LemmaSample s;
    s.label = label("p", idx++);
    s.lhs = value2;
    s.rhs = int_grad + int_mass;
    s.implied = s.rhs > 0 ? s.lhs / s.rhs : 0.0;
    s.pass = value2 <= c8sq * (int_grad + int_mass) * 1.1 + 1e-30;
    rep.pass = rep.pass && s.pass;
    rep.samples.push_back(s);
  }
  return rep;
}

LemmaReport verify_convex_subset_bound(const FormPair& fp, const std::vector<int>& q_elems,
                                       const std::vector<int>& g_elems,
                                       const std::vector<int>& pi_elems, double pi_diameter,
                                       const std::vector<VectorC>& samples) {
  const Mesh& mesh = *fp.mesh;
  auto measure = [&](const std::vector<int>& elems) {
    double a = 0.0;
    for (int t : elems) a += mesh.tri_area(t);
    return a;
  };
  const double mu_q = measure(q_elems);
  const double mu_g = measure(g_elems);
  if (!(mu_g > 0)) throw InvalidSpecError("subset G has zero measure");

  LemmaReport rep;
  rep.lemma = "convex-subset-mass";
  rep.note = "int_Q |v|^2 <= 2 mu(Q)/mu(G) int_G |v|^2 + C d^3 mu(Q)^{1/2}/mu(G) int_Pi |grad v|^2";

  int i = 0;
  for (const VectorC& v : samples) {
    const double lhs = restricted_energy(mesh, v, q_elems).mass;
    const double g_term = 2.0 * mu_q / mu_g * restricted_energy(mesh, v, g_elems).mass;
    const double grad = restricted_energy(mesh, v, pi_elems).grad;
    LemmaSample s;
    s.label = label("v", i++);
    s.lhs = lhs;
    s.rhs = grad;
    if (grad > 0 && lhs > g_term)
      s.implied = (lhs - g_term) * mu_g /
                  (pi_diameter * pi_diameter * pi_diameter * std::sqrt(mu_q) * grad);
    else
      s.implied = 0.0;
    rep.samples.push_back(s);
  }
  return rep;
}

LemmaReport verify_convex_subset_refinement(const FormPair& coarse, const FormPair& fine,
                                            Vec2 center, double r_inner, double r_outer,
                                            int n_modes, double tol) {
  auto run = [&](const FormPair& fp) {
    const Mesh& mesh = *fp.mesh;
    const std::vector<int> pi = elements_in_ball(mesh, center, r_outer);
    const std::vector<int> q = elements_in_ball(mesh, center, r_inner);
    std::vector<int> g;
    for (int t : pi)
      if (dist(mesh.centroid(t), center) > r_inner) g.push_back(t);

    const SpectralResult modes = solve_lowest(fp, n_modes, tol);
    std::vector<VectorC> samples;
    for (int i = 0; i < modes.m_achieved; ++i) samples.push_back(modes.eigenvectors.col(i));
    return verify_convex_subset_bound(fp, q, g, pi, 2.0 * r_outer, samples);
  };

  LemmaReport rc = run(coarse);
  LemmaReport rf = run(fine);

  auto max_implied = [](const LemmaReport& r) {
    double m = 0.0;
    for (const LemmaSample& s : r.samples) m = std::max(m, s.implied);
    return m;
  };
  const double mc = max_implied(rc);
  const double mf = max_implied(rf);

  LemmaReport rep;
  rep.lemma = "convex-subset-mass";
  rep.samples = rc.samples;
  rep.samples.insert(rep.samples.end(), rf.samples.begin(), rf.samples.end());
  const double lo = std::min(mc, mf), hi = std::max(mc, mf);
  rep.pass = (hi == 0.0) || (lo > 0.0 && hi <= 3.0 * lo) || (lo == 0.0 && hi == 0.0);
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "max implied constant %.6g at h, %.6g at h/2; stable within factor 3: %s", mc,
                mf, rep.pass ? "yes" : "no");
  rep.note = buf;
  return rep;
}

}  // namespace magnl
