#ifndef MAGNL_EXPERIMENTS_HPP
#define MAGNL_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magnl/coupling.hpp"
#include "magnl/lemmas.hpp"

namespace magnl {

struct SweepConfig {
  DomainSpec domain;
  HoleSpec hole;  // scale is overridden by each sweep epsilon
  std::vector<double> epsilons;
  PotentialModel field = PotentialModel::uniform(1.0);
  double h = 0.0;    // <= 0: default eps_min / 8
  int m = 6;
  double tol = 1e-8;
  double eta = 0.0;  // <= 0: auto, three times the recorded mesh floor
  int grid_n = 32;
  std::uint64_t seed = 12345;
  int threads = 1;

  double mesh_h() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Discretization error floor: the same h on the zero-field unit square,
/// measured against the separation-of-variables spectrum. Spectral distances
/// below this are mesh noise.
struct MeshFloor {
  double lambda_err = 0.0;  // max_k |lambda_k(h) - lambda_k|
  double dbar_err = 0.0;    // the same gap in the resolvent metric
};
MeshFloor compute_mesh_floor(double h, int m, double tol);

/// Neumann eigenvalues of the unit square, pi^2 (p^2 + q^2), ascending.
std::vector<double> unit_square_neumann_eigenvalues(int count);

struct SweepRow {
  double eps = 0.0;
  double h = 0.0;
  std::vector<double> lambda_omega;  // first m
  std::vector<double> lambda_hole;
  double dbar = 0.0;
  double dbar_trunc = 0.0;
  double delta5p = 0.0;
  double delta6 = 0.0;
  double delta7 = 0.0;
  int pollution_count = 0;  // hole eigenvalues with no domain partner
  double runtime_ms = 0.0;
};

struct RateFit {
  double coefficient = 0.0;  // C in value = C eps^p
  double exponent = 0.0;     // p
  double residual = 0.0;     // rms misfit in log space
  int n_used = 0;
};

/// Log-log least squares for value = C eps^p. Requires at least three pairs
/// with positive values.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct SweepResult {
  std::vector<SweepRow> rows;  // one per epsilon, in config order
  MeshFloor floor;
  double eta = 0.0;
  int m = 0;
  std::uint64_t seed = 0;
  std::optional<RateFit> fit_dbar;
  std::optional<RateFit> fit_delta5p;
  std::optional<RateFit> fit_delta6;
  std::optional<RateFit> fit_delta7;
};

/// Meshes the domain once, derives every punctured mesh from it, solves both
/// sides per epsilon, and collects spectral distances, closeness levels and
/// eigenvalue pairings. Per-epsilon work runs on config.threads workers; the
/// output is identical for any thread count.
SweepResult run_sweep(const SweepConfig& config);

/// CSV rows, one per (epsilon, k):
/// epsilon,h,k,lambda_omega,lambda_hole,dbar,dbar_trunc_err,delta5p,delta6,
/// delta7,pollution_count,runtime_ms
std::string sweep_csv(const SweepResult& r);
void write_sweep_csv(const SweepResult& r, const std::string& path);

/// Pollution contrast between a split-ring hole and a disk control at the
/// same epsilons and mesh.
struct SplitRingReport {
  SweepResult ring;
  SweepResult disk;
};
SplitRingReport split_ring_study(const SweepConfig& config);
std::string split_ring_summary(const SplitRingReport& rep);

/// Runs the closeness estimation alone, one report per epsilon.
std::vector<ClosenessReport> run_closeness(const SweepConfig& config);
std::string closeness_csv(const std::vector<ClosenessReport>& reports);

/// All appendix inequality checks on the configured geometry.
std::vector<LemmaReport> run_lemma_suite(const SweepConfig& config);
std::string lemma_text_report(const std::vector<LemmaReport>& reports);
std::string lemma_csv(const std::vector<LemmaReport>& reports);

}  // namespace magnl

#endif  // MAGNL_EXPERIMENTS_HPP
