// Command-line laboratory for spectra of the magnetic Neumann Laplacian on
// domains with a small hole: meshing, eigenvalue sweeps, spectral distances,
// closeness estimates and inequality checks, driven by a JSON config.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "magnl/config.hpp"
#include "magnl/errors.hpp"
#include "magnl/mesh_io.hpp"
#include "magnl/plot.hpp"

namespace fs = std::filesystem;
using namespace magnl;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir = "out";
  int threads = 1;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", args.output_dir, "output directory (created if absent)");
  cmd->add_option("--threads", args.threads, "worker threads for per-epsilon stages")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("-v,--verbose", args.verbose, "chatty progress output");
}

SweepConfig load(const CommonArgs& args) {
  SweepConfig cfg = load_config(args.config_path);
  cfg.threads = args.threads;
  fs::create_directories(args.output_dir);
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << content;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void emit_sweep_artifacts(const SweepResult& result, const std::string& dir,
                          const std::string& stem) {
  write_sweep_csv(result, join(dir, stem + ".csv"));

  auto series_of = [&](const char* name, auto getter) {
    PlotSeries s;
    s.name = name;
    for (const SweepRow& r : result.rows)
      if (getter(r) > 0) s.points.push_back({r.eps, getter(r)});
    return s;
  };
  const PlotSeries dbar_series =
      series_of("dbar", [](const SweepRow& r) { return r.dbar; });
  if (dbar_series.points.size() >= 2)
    write_loglog_svg(join(dir, stem + "_dbar.svg"), "spectral distance vs hole size",
                     "epsilon", "dbar", {dbar_series});
  std::vector<PlotSeries> deltas;
  for (const PlotSeries& s :
       {series_of("delta5'", [](const SweepRow& r) { return r.delta5p; }),
        series_of("delta6", [](const SweepRow& r) { return r.delta6; }),
        series_of("delta7", [](const SweepRow& r) { return r.delta7; })})
    if (s.points.size() >= 2) deltas.push_back(s);
  if (!deltas.empty())
    write_loglog_svg(join(dir, stem + "_deltas.svg"), "closeness levels vs hole size",
                     "epsilon", "delta", deltas);

  char buf[256];
  std::string summary;
  std::snprintf(buf, sizeof buf, "mesh floor: lambda %.6g, dbar %.6g; eta = %.6g\n",
                result.floor.lambda_err, result.floor.dbar_err, result.eta);
  summary += buf;
  auto fit_line = [&](const char* name, const std::optional<RateFit>& fit) {
    if (fit) {
      std::snprintf(buf, sizeof buf, "%s fit: C = %.6g, p = %.6g, rms = %.3g (n = %d)\n", name,
                    fit->coefficient, fit->exponent, fit->residual, fit->n_used);
      summary += buf;
    } else {
      summary += std::string(name) + " fit: not enough usable rows\n";
    }
  };
  fit_line("dbar", result.fit_dbar);
  fit_line("delta5p", result.fit_delta5p);
  fit_line("delta6", result.fit_delta6);
  fit_line("delta7", result.fit_delta7);
  write_file(join(dir, stem + "_summary.txt"), summary);
}

int cmd_mesh(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const auto omega = triangulate_domain(cfg.domain, cfg.mesh_h());
  write_mesh_text(*omega, join(args.output_dir, "mesh_domain.txt"));
  if (cfg.hole.kind != HoleKind::None) {
    HoleSpec hs = cfg.hole;
    hs.scale = cfg.epsilons.front();
    const auto holed = carve_hole(omega, build_hole(hs));
    write_mesh_text(*holed, join(args.output_dir, "mesh_hole.txt"));
    std::printf("wrote mesh_domain.txt (%d nodes) and mesh_hole.txt (%d nodes)\n",
                omega->n_nodes(), holed->n_nodes());
  } else {
    std::printf("wrote mesh_domain.txt (%d nodes)\n", omega->n_nodes());
  }
  return 0;
}

std::string spectrum_csv(const SpectralResult& r) {
  std::string out = "k,lambda,residual\n";
  char buf[96];
  for (int i = 0; i < r.m_achieved; ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", i + 1, r.eigenvalues[i], r.residuals[i]);
    out += buf;
  }
  return out;
}

int cmd_solve(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const auto omega = triangulate_domain(cfg.domain, cfg.mesh_h());
  const FormPair fp = assemble(omega, cfg.field);
  const SpectralResult r = solve_lowest(fp, cfg.m, cfg.tol);
  write_file(join(args.output_dir, "spectrum_domain.csv"), spectrum_csv(r));
  std::printf("domain: lowest %d eigenvalues written\n", r.m_achieved);

  if (cfg.hole.kind != HoleKind::None) {
    HoleSpec hs = cfg.hole;
    hs.scale = cfg.epsilons.front();
    const auto holed = carve_hole(omega, build_hole(hs));
    const FormPair fph = assemble(holed, cfg.field);
    const SpectralResult rh = solve_lowest(fph, cfg.m, cfg.tol);
    write_file(join(args.output_dir, "spectrum_hole.csv"), spectrum_csv(rh));
    std::printf("punctured domain (eps = %g): lowest %d eigenvalues written\n",
                cfg.epsilons.front(), rh.m_achieved);
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const SweepResult result = run_sweep(cfg);
  emit_sweep_artifacts(result, args.output_dir, "sweep");
  std::printf("sweep complete: %zu epsilon values, CSV and SVG written to %s\n",
              result.rows.size(), args.output_dir.c_str());
  if (args.verbose)
    for (const SweepRow& r : result.rows)
      std::printf("  eps %-8g dbar %-12g delta5p %-12g delta6 %-12g delta7 %-12g\n", r.eps,
                  r.dbar, r.delta5p, r.delta6, r.delta7);
  return 0;
}

int cmd_closeness(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const auto reports = run_closeness(cfg);
  write_file(join(args.output_dir, "closeness.csv"), closeness_csv(reports));
  std::printf("closeness levels for %zu epsilon values written\n", reports.size());
  return 0;
}

int cmd_lemmas(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const auto reports = run_lemma_suite(cfg);
  write_file(join(args.output_dir, "lemmas.txt"), lemma_text_report(reports));
  write_file(join(args.output_dir, "lemmas.csv"), lemma_csv(reports));
  for (const auto& r : reports)
    std::printf("%s %s\n", r.pass ? "[PASS]" : "[FAIL]", r.lemma.c_str());
  return 0;
}

int cmd_property_star(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const Polygon domain = build_domain(cfg.domain);
  HoleSpec hs = cfg.hole;
  if (hs.kind != HoleKind::None) hs.scale = cfg.epsilons.front();
  const HoleGeometry hole = build_hole(hs);
  const PropertyStarReport rep = check_property_star(domain, hole, cfg.grid_n);

  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "grid_n %d, samples tested %d\ncompliant: %s\n", rep.grid_n,
                rep.samples_tested, rep.compliant ? "yes" : "no");
  out += buf;
  if (rep.witness) {
    std::snprintf(buf, sizeof buf,
                  "witness (%.12g, %.12g), half-lines hit (up,down,left,right) = %d%d%d%d\n",
                  rep.witness->x, rep.witness->y, static_cast<int>(rep.witness_rays_hit[0]),
                  static_cast<int>(rep.witness_rays_hit[1]),
                  static_cast<int>(rep.witness_rays_hit[2]),
                  static_cast<int>(rep.witness_rays_hit[3]));
    out += buf;
  }
  write_file(join(args.output_dir, "property_star.txt"), out);
  std::fputs(out.c_str(), stdout);
  return 0;
}

int cmd_split_ring(const CommonArgs& args) {
  const SweepConfig cfg = load(args);
  const SplitRingReport rep = split_ring_study(cfg);
  emit_sweep_artifacts(rep.ring, args.output_dir, "sweep_splitring");
  emit_sweep_artifacts(rep.disk, args.output_dir, "sweep_disk");
  const std::string summary = split_ring_summary(rep);
  write_file(join(args.output_dir, "splitring_contrast.txt"), summary);
  std::fputs(summary.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magnetic Neumann Laplacian on a domain with a hole: numerical laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*handler)(const CommonArgs&) = nullptr;

  auto reg = [&](const char* name, const char* desc, int (*fn)(const CommonArgs&)) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common(cmd, args);
    cmd->callback([&handler, fn] { handler = fn; });
  };
  reg("mesh", "triangulate the domain (and punctured domain) and export", cmd_mesh);
  reg("solve", "lowest eigenvalues of the configured domain(s)", cmd_solve);
  reg("sweep", "epsilon sweep: spectra, distances, closeness levels, rate fits", cmd_sweep);
  reg("closeness", "closeness levels for all seven conditions per epsilon", cmd_closeness);
  reg("lemmas", "verify the inequality suite on the configured geometry", cmd_lemmas);
  reg("property-star", "check the axis half-line condition by grid sampling", cmd_property_star);
  reg("split-ring", "pollution contrast: split-ring hole vs disk control", cmd_split_ring);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    return handler(args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const InvalidSpecError& e) {
    std::fprintf(stderr, "invalid specification: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
