#include "magnl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include "magnl/errors.hpp"

namespace magnl {

double SweepConfig::mesh_h() const {
  if (h > 0) return h;
  if (epsilons.empty()) throw ConfigError("epsilons: empty list");
  return epsilons.back() / 8.0;
}

void SweepConfig::validate() const {
  if (epsilons.empty()) throw ConfigError("epsilons: empty list");
  for (double e : epsilons)
    if (!(e > 0)) throw ConfigError("epsilons: entries must be positive");
  for (size_t i = 0; i + 1 < epsilons.size(); ++i)
    if (!(epsilons[i] > epsilons[i + 1]))
      throw ConfigError("epsilons: entries must be strictly decreasing");
  if (m < 1) throw ConfigError("m: must be at least 1");
  if (!(tol > 1e-12 && tol < 1e-4)) throw ConfigError("tol: must lie in (1e-12, 1e-4)");
  if (grid_n < 16) throw ConfigError("grid_n: must be at least 16");
  if (threads < 1) throw ConfigError("threads: must be at least 1");

  const double hh = mesh_h();
  if (hh > epsilons.back() / 4.0 + 1e-15)
    throw ConfigError("h: must resolve the smallest hole (h <= eps_min / 4)");

  if (hole.kind != HoleKind::None) {
    const Polygon poly = build_domain(domain);
    for (double e : epsilons) {
      if (dist_to_polygon_boundary(hole.center, poly) <= 2.0 * e ||
          !point_in_polygon(hole.center, poly))
        throw ConfigError("epsilons: ball of radius 2 eps must stay inside the domain");
    }
  }
}

std::vector<double> unit_square_neumann_eigenvalues(int count) {
  std::vector<double> vals;
  const int range = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))) + 2;
  for (int p = 0; p <= range; ++p)
    for (int q = 0; q <= range; ++q)
      vals.push_back(M_PI * M_PI * (p * p + q * q));
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

MeshFloor compute_mesh_floor(double h, int m, double tol) {
  const DomainSpec square = DomainSpec::rectangle(0, 0, 1, 1);
  auto mesh = triangulate_domain(square, h);
  const FormPair fp = assemble(mesh, PotentialModel::uniform(0.0));
  const SpectralResult r = solve_lowest(fp, m + 1, tol);
  const std::vector<double> exact = unit_square_neumann_eigenvalues(m + 1);

  MeshFloor floor;
  for (int k = 0; k < m; ++k)
    floor.lambda_err = std::max(floor.lambda_err, std::abs(r.eigenvalues[k] - exact[k]));

  const SpectrumSet discrete = SpectrumSet::from_result(r, m);
  const SpectrumSet analytic =
      SpectrumSet::from_values(std::vector<double>(exact.begin(), exact.begin() + m), exact[m]);
  floor.dbar_err = dbar(discrete, analytic).value;
  return floor;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw InvalidSpecError("rate fit needs at least three pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [eps, value] : pairs) {
    if (!(value > 0) || !(eps > 0))
      throw InvalidSpecError("rate fit requires positive values (log domain)");
    const double x = std::log(eps), y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw InvalidSpecError("rate fit is degenerate (single epsilon)");
  RateFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
  fit.n_used = static_cast<int>(pairs.size());
  double ss = 0;
  for (const auto& [eps, value] : pairs) {
    const double pred = std::log(fit.coefficient) + fit.exponent * std::log(eps);
    ss += std::pow(std::log(value) - pred, 2);
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

namespace {

struct EpsOutcome {
  SweepRow row;
  SpectralResult hole_modes;
};

// Deterministic per-epsilon seed derivation.
std::uint64_t derive_seed(std::uint64_t base, size_t index) {
  std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

void run_indexed(int n_tasks, int threads, const std::function<void(int)>& task) {
  if (threads <= 1 || n_tasks <= 1) {
    for (int i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  const int workers = std::min(threads, n_tasks);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const double h = config.mesh_h();
  const int m = config.m;
  const int n_modes = std::max(m + 1, 8);

  const auto omega_mesh = triangulate_domain(config.domain, h);
  const FormPair omega_form = assemble(omega_mesh, config.field);
  const SpectralResult omega_modes = solve_lowest(omega_form, n_modes, config.tol);
  const SpectrumSet omega_spec = SpectrumSet::from_result(omega_modes, m);

  SweepResult result;
  result.m = m;
  result.seed = config.seed;
  result.floor = compute_mesh_floor(h, m, config.tol);
  result.eta = config.eta > 0 ? config.eta : 3.0 * result.floor.lambda_err;

  const int n_eps = static_cast<int>(config.epsilons.size());
  std::vector<EpsOutcome> outcomes(n_eps);

  run_indexed(n_eps, config.threads, [&](int idx) {
    const auto start = std::chrono::steady_clock::now();
    const double eps = config.epsilons[idx];

    HoleSpec hs = config.hole;
    hs.scale = eps;

    const auto hole_mesh = carve_hole(omega_mesh, build_hole(hs));
    CouplingPair cp =
        make_coupling(omega_mesh, hole_mesh, config.field, hs.center, eps);
    const SpectralResult hole_modes = solve_lowest(cp.hole_form, n_modes, config.tol);

    SweepRow row;
    row.eps = eps;
    row.h = h;
    row.lambda_omega.assign(omega_modes.eigenvalues.begin(), omega_modes.eigenvalues.begin() + m);
    row.lambda_hole.assign(hole_modes.eigenvalues.begin(), hole_modes.eigenvalues.begin() + m);

    const SpectrumSet hole_spec = SpectrumSet::from_result(hole_modes, m);
    const DbarDistance d = dbar(omega_spec, hole_spec);
    row.dbar = d.value;
    row.dbar_trunc = d.truncation_error;

    if (hs.kind == HoleKind::None) {
      row.delta5p = row.delta6 = row.delta7 = 0.0;
    } else {
      const TestSet ts =
          make_test_set(cp, omega_modes, hole_modes, 8, 8, derive_seed(config.seed, idx));
      const ClosenessReport cr = estimate_closeness(cp, ts);
      row.delta5p = cr.delta(Condition::ZeroExtensionDefect);
      row.delta6 = cr.delta(Condition::ExtensionMismatch);
      row.delta7 = cr.delta(Condition::FormTransferDefect);
    }

    const MatchReport match =
        match_eigenvalues(row.lambda_omega, row.lambda_hole, result.eta);
    row.pollution_count = static_cast<int>(match.unpaired_b.size());

    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    outcomes[idx].row = std::move(row);
    outcomes[idx].hole_modes = hole_modes;
  });

  for (auto& o : outcomes) result.rows.push_back(std::move(o.row));

  // Rate fits: d-bar rows below three times the mesh floor are noise and are
  // excluded; the closeness levels are fitted over their positive entries.
  auto collect = [&](auto getter, bool floor_filter) {
    std::vector<std::pair<double, double>> pairs;
    for (const SweepRow& r : result.rows) {
      const double v = getter(r);
      if (!(v > 0)) continue;
      if (floor_filter && v < 3.0 * result.floor.dbar_err) continue;
      pairs.push_back({r.eps, v});
    }
    return pairs;
  };
  auto try_fit = [&](const std::vector<std::pair<double, double>>& pairs)
      -> std::optional<RateFit> {
    if (pairs.size() < 3) return std::nullopt;
    return fit_rate(pairs);
  };
  result.fit_dbar = try_fit(collect([](const SweepRow& r) { return r.dbar; }, true));
  result.fit_delta5p = try_fit(collect([](const SweepRow& r) { return r.delta5p; }, false));
  result.fit_delta6 = try_fit(collect([](const SweepRow& r) { return r.delta6; }, false));
  result.fit_delta7 = try_fit(collect([](const SweepRow& r) { return r.delta7; }, false));
  return result;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string sweep_csv(const SweepResult& r) {
  std::string out =
      "epsilon,h,k,lambda_omega,lambda_hole,dbar,dbar_trunc_err,delta5p,delta6,delta7,"
      "pollution_count,runtime_ms\n";
  for (const SweepRow& row : r.rows) {
    for (int k = 0; k < r.m; ++k) {
      out += num(row.eps) + "," + num(row.h) + "," + std::to_string(k + 1) + "," +
             num(row.lambda_omega[k]) + "," + num(row.lambda_hole[k]) + "," + num(row.dbar) +
             "," + num(row.dbar_trunc) + "," + num(row.delta5p) + "," + num(row.delta6) + "," +
             num(row.delta7) + "," + std::to_string(row.pollution_count) + "," +
             num(row.runtime_ms) + "\n";
    }
  }
  return out;
}

void write_sweep_csv(const SweepResult& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << sweep_csv(r);
}

SplitRingReport split_ring_study(const SweepConfig& config) {
  if (config.hole.kind != HoleKind::SplitRing)
    throw ConfigError("hole: split-ring study needs a split-ring hole");
  SplitRingReport rep;
  rep.ring = run_sweep(config);

  SweepConfig control = config;
  control.hole = HoleSpec::disk(config.hole.center, 0.0);
  rep.disk = run_sweep(control);
  return rep;
}

std::string split_ring_summary(const SplitRingReport& rep) {
  std::string out = "split-ring pollution contrast (eta = " + num(rep.ring.eta) + ")\n";
  out += "epsilon, ring unpaired, disk unpaired\n";
  for (size_t i = 0; i < rep.ring.rows.size(); ++i) {
    out += num(rep.ring.rows[i].eps) + ", " +
           std::to_string(rep.ring.rows[i].pollution_count) + ", " +
           std::to_string(rep.disk.rows[i].pollution_count) + "\n";
  }
  return out;
}

std::vector<ClosenessReport> run_closeness(const SweepConfig& config) {
  config.validate();
  if (config.hole.kind == HoleKind::None)
    throw ConfigError("hole: closeness estimation needs a hole");
  const double h = config.mesh_h();
  const int n_modes = std::max(config.m + 1, 8);

  const auto omega_mesh = triangulate_domain(config.domain, h);
  const FormPair omega_form = assemble(omega_mesh, config.field);
  const SpectralResult omega_modes = solve_lowest(omega_form, n_modes, config.tol);

  const int n_eps = static_cast<int>(config.epsilons.size());
  std::vector<ClosenessReport> reports(n_eps);
  run_indexed(n_eps, config.threads, [&](int idx) {
    HoleSpec hs = config.hole;
    hs.scale = config.epsilons[idx];
    const auto hole_mesh = carve_hole(omega_mesh, build_hole(hs));
    CouplingPair cp =
        make_coupling(omega_mesh, hole_mesh, config.field, hs.center, hs.scale);
    const SpectralResult hole_modes = solve_lowest(cp.hole_form, n_modes, config.tol);
    const TestSet ts =
        make_test_set(cp, omega_modes, hole_modes, 8, 8, derive_seed(config.seed, idx));
    reports[idx] = estimate_closeness(cp, ts);
  });
  return reports;
}

std::string closeness_csv(const std::vector<ClosenessReport>& reports) {
  std::string out = "epsilon,h,delta1,delta2,delta3,delta4,delta5p,delta6,delta7,seed\n";
  for (const ClosenessReport& r : reports) {
    out += num(r.eps) + "," + num(r.h);
    for (int i = 0; i < 7; ++i) out += "," + num(r.deltas[i]);
    out += "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

std::vector<LemmaReport> run_lemma_suite(const SweepConfig& config) {
  config.validate();
  const double h = config.mesh_h();
  const int n_modes = std::max(config.m + 1, 8);

  const auto omega_mesh = triangulate_domain(config.domain, h);
  const FormPair omega_form = assemble(omega_mesh, config.field);
  const FormPair plain_form = assemble(omega_mesh, PotentialModel::uniform(0.0));
  const SpectralResult omega_modes = solve_lowest(omega_form, n_modes, config.tol);

  std::vector<LemmaReport> reports;

  // Shifted-energy inequality on seeded random vectors.
  {
    std::mt19937_64 rng(derive_seed(config.seed, 101));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<VectorC> zs;
    for (int s = 0; s < 100; ++s) {
      VectorC z(omega_form.n);
      for (int i = 0; i < omega_form.n; ++i) z[i] = Complex(gauss(rng), gauss(rng));
      zs.push_back(std::move(z));
    }
    reports.push_back(verify_energy_shift(omega_form, zs));
  }

  // Field comparison on the eigenvector family.
  {
    std::vector<VectorC> vs;
    for (int i = 0; i < omega_modes.m_achieved; ++i)
      vs.push_back(omega_modes.eigenvectors.col(i));
    const double sup = sup_norm_on_mesh(config.field, *omega_mesh);
    reports.push_back(verify_field_comparison(omega_form, plain_form, sup, vs));
  }

  if (config.hole.kind != HoleKind::None) {
    // Per-epsilon couplings for the ball, trace and line bounds.
    std::vector<CouplingPair> cps;
    std::vector<SpectralResult> hole_modes;
    for (double eps : config.epsilons) {
      HoleSpec hs = config.hole;
      hs.scale = eps;
      const auto hole_mesh = carve_hole(omega_mesh, build_hole(hs));
      cps.push_back(make_coupling(omega_mesh, hole_mesh, config.field, hs.center, eps));
      hole_modes.push_back(solve_lowest(cps.back().hole_form, n_modes, config.tol));
    }
    std::vector<BallCase> cases;
    for (size_t i = 0; i < cps.size(); ++i) {
      BallCase c;
      c.eps = config.epsilons[i];
      c.radius = 1.5 * c.eps;
      c.cp = &cps[i];
      c.omega_modes = &omega_modes;
      c.hole_modes = &hole_modes[i];
      cases.push_back(c);
    }
    for (LemmaReport& r : verify_ball_bounds(cases)) reports.push_back(std::move(r));
    reports.push_back(verify_trace_bound(cases));

    // Pointwise line bound at probe points around the largest hole.
    {
      const double eps0 = config.epsilons.front();
      const Polygon poly = build_domain(config.domain);
      std::vector<Vec2> points;
      for (int k = 0; k < 8; ++k) {
        const double phi = 2.0 * M_PI * (k + 0.5) / 8;
        points.push_back(config.hole.center + 1.75 * eps0 * Vec2{std::cos(phi), std::sin(phi)});
      }
      const VectorC u = hole_modes.front().eigenvectors.col(
          std::min(1, hole_modes.front().m_achieved - 1));
      reports.push_back(verify_line_bound(*cps.front().hole, poly, points, u));
    }

    // Subset-mass inequality under mesh refinement, on the unperturbed form.
    {
      const auto fine_mesh = triangulate_domain(config.domain, h / 2.0);
      const FormPair fine_form = assemble(fine_mesh, config.field);
      const double eps0 = config.epsilons.front();
      reports.push_back(verify_convex_subset_refinement(
          omega_form, fine_form, config.hole.center, 1.5 * eps0, 2.0 * eps0,
          std::min(4, config.m), config.tol));
    }
  }

  return reports;
}

std::string lemma_text_report(const std::vector<LemmaReport>& reports) {
  std::string out;
  for (const LemmaReport& r : reports) {
    out += std::string(r.pass ? "[PASS] " : "[FAIL] ") + r.lemma + "  (" + r.note + ")\n";
    for (const LemmaSample& s : r.samples) {
      out += "    " + s.label + ": lhs=" + num(s.lhs) + " rhs=" + num(s.rhs) +
             " implied=" + num(s.implied) + (s.pass ? "" : "  <-- violated") + "\n";
    }
  }
  return out;
}

std::string lemma_csv(const std::vector<LemmaReport>& reports) {
  std::string out = "lemma,sample,lhs,rhs,implied,pass\n";
  for (const LemmaReport& r : reports)
    for (const LemmaSample& s : r.samples)
      out += r.lemma + "," + s.label + "," + num(s.lhs) + "," + num(s.rhs) + "," +
             num(s.implied) + "," + (s.pass ? "1" : "0") + "\n";
  return out;
}

}  // namespace magnl
