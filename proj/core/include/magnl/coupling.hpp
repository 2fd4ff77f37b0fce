#ifndef MAGNL_COUPLING_HPP
#define MAGNL_COUPLING_HPP

#include <array>
#include <cstdint>
#include <string>

#include "magnl/solver.hpp"
#include "magnl/spectra.hpp"

namespace magnl {

/// The two discrete operators (domain and punctured domain on nested meshes)
/// together with the exact node maps between them. Restriction and extension
/// between the FE spaces are pure index operations; the radial extension
/// additionally needs the hole ball data.
struct CouplingPair {
  std::shared_ptr<const Mesh> omega;
  std::shared_ptr<const Mesh> hole;
  FormPair omega_form;
  FormPair hole_form;
  Vec2 center{};
  double eps = 0.0;
  /// False when a slit duplicated nodes: the hole-to-domain node map is then
  /// many-to-one and the round-trip identity no longer holds exactly.
  bool injective = true;
  std::vector<int> omega_to_hole;  // -1 where the node was removed; otherwise
                                   // the primary (lowest-id) hole node
};

CouplingPair make_coupling(std::shared_ptr<const Mesh> omega,
                           std::shared_ptr<const Mesh> hole_mesh,
                           const PotentialModel& potential, Vec2 center, double eps);

/// Gathers a domain field through the node map; the two restriction maps of
/// the closeness framework coincide by construction.
VectorC restrict_to_hole(const CouplingPair& cp, const VectorC& f);

/// Scatters a punctured-domain field back, zero on removed nodes. On cracked
/// meshes the primary copy of each duplicated node wins.
VectorC extend_by_zero(const CouplingPair& cp, const VectorC& u);

struct RadiusChoice {
  double radius = 0.0;           // minimizer among the sampled radii
  double angular_energy = 0.0;   // integral of |d/dphi u|^2 on that circle
  std::vector<double> radii;     // all sampled radii in (eps, 2 eps)
  std::vector<double> energies;  // angular energies per radius
};

/// Samples circles of radius r in (eps, 2 eps) around the hole center and
/// returns the radius with the smallest angular-derivative energy, computed
/// by centered differences of the P1 trace on a uniform angle grid.
RadiusChoice choose_radius(const CouplingPair& cp, const VectorC& u, int n_radii = 32,
                           int n_phi = 256);

/// Linear radial extension: copies the field outside the circle of radius
/// eps_tilde and fills the disk with (r/eps_tilde) times the circle trace.
VectorC extend_radial(const CouplingPair& cp, const VectorC& u, double eps_tilde);

/// Closeness conditions between the two operators.
enum class Condition {
  RestrictionAgreement = 1,  // the two restrictions coincide
  AdjointDefect = 2,         // inner-product transfer
  RoundTripIdentity = 3,     // restrict(extend-by-zero) = identity
  NormBound = 4,             // both maps bounded by 2 in L2
  ZeroExtensionDefect = 5,   // mass lost in the hole ball (the primed variant)
  ExtensionMismatch = 6,     // zero vs radial extension
  FormTransferDefect = 7,    // sesquilinear form transfer
};

/// Deterministic test family: the first eigenvectors of each side plus
/// seeded random Gaussian-bump combinations.
struct TestSet {
  std::vector<VectorC> on_omega;
  std::vector<VectorC> on_hole;
  std::string description;
  std::uint64_t seed = 0;
};

TestSet make_test_set(const CouplingPair& cp, const SpectralResult& omega_modes,
                      const SpectralResult& hole_modes, int n_eigs, int n_bumps,
                      std::uint64_t seed);

/// Solves for the leading modes internally, then as above.
TestSet make_test_set(const CouplingPair& cp, int n_eigs = 8, int n_bumps = 8,
                      std::uint64_t seed = 12345);

/// Empirical closeness levels: for each condition, the maximum over the test
/// set of the defect divided by the condition's norm product. Lower bounds on
/// the operator-level constants; the trends in eps are the verifiable content.
struct ClosenessReport {
  std::array<double, 7> deltas{};  // conditions 1..7 (index 4 is the primed 5)
  double eps = 0.0;
  double h = 0.0;
  std::string test_description;
  std::uint64_t seed = 0;
  std::vector<double> chosen_radii;  // per hole-side test function

  double delta(Condition c) const { return deltas[static_cast<int>(c) - 1]; }
};

ClosenessReport estimate_closeness(const CouplingPair& cp, const TestSet& ts);

double estimate_delta(const CouplingPair& cp, Condition c, const TestSet& ts);

}  // namespace magnl

#endif  // MAGNL_COUPLING_HPP
