#ifndef MAGNL_SPECTRA_HPP
#define MAGNL_SPECTRA_HPP

#include <vector>

#include "magnl/solver.hpp"

namespace magnl {

/// Finite truncation of a nonnegative spectrum. The tail of the untracked
/// spectrum is surrogated, after the map t -> 1/(1+t), by the interval
/// [0, tail] with tail = 1/(1 + lambda_{m+1}).
struct SpectrumSet {
  std::vector<double> values;  // ascending, tiny negatives clamped to 0
  double tail = 1.0;           // in (0, 1]

  static SpectrumSet from_values(std::vector<double> values, double lambda_next);
  /// First m eigenvalues of the result; requires m+1 computed for the tail.
  static SpectrumSet from_result(const SpectralResult& r, int m);
};

/// Hausdorff distance between finite nonempty sets.
double hausdorff(const std::vector<double>& a, const std::vector<double>& b);

struct DbarDistance {
  double value = 0.0;
  double truncation_error = 0.0;  // max of the two tail surrogates
};

/// Resolvent-metric distance: Hausdorff distance between the images of the
/// spectra under t -> 1/(1+t), with each side's tail interval represented by
/// its endpoints and measured by point-to-interval distance.
DbarDistance dbar(const SpectrumSet& a, const SpectrumSet& b);

struct MatchPair {
  int index_a = 0;
  int index_b = 0;
  double gap = 0.0;
};

/// Injective pairing of two sorted eigenvalue lists: closest pairs first,
/// only gaps within eta accepted. Unpaired entries on either side are
/// spectral-pollution candidates.
struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<int> unpaired_a;
  std::vector<int> unpaired_b;
  double eta = 0.0;
};

MatchReport match_eigenvalues(const std::vector<double>& a, const std::vector<double>& b,
                              double eta);

}  // namespace magnl

#endif  // MAGNL_SPECTRA_HPP
