#include "magnl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magnl/errors.hpp"

namespace magnl {

SpectrumSet SpectrumSet::from_values(std::vector<double> values, double lambda_next) {
  if (values.empty()) throw InvalidSpecError("spectrum set must be nonempty");
  for (double& v : values) {
    if (v < -1e-9) throw InvalidSpecError("spectrum has a significantly negative eigenvalue");
    v = std::max(v, 0.0);
  }
  std::sort(values.begin(), values.end());
  SpectrumSet s;
  s.values = std::move(values);
  s.tail = 1.0 / (1.0 + std::max(lambda_next, 0.0));
  return s;
}

SpectrumSet SpectrumSet::from_result(const SpectralResult& r, int m) {
  if (m < 1 || m + 1 > r.m_achieved)
    throw InvalidSpecError("spectrum set needs m+1 computed eigenvalues");
  std::vector<double> vals(r.eigenvalues.begin(), r.eigenvalues.begin() + m);
  return from_values(std::move(vals), r.eigenvalues[m]);
}

namespace {

double dist_to_set(double x, const std::vector<double>& s) {
  double d = std::numeric_limits<double>::max();
  for (double v : s) d = std::min(d, std::abs(x - v));
  return d;
}

}  // namespace

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw InvalidSpecError("Hausdorff distance undefined for empty sets");
  double d = 0.0;
  for (double x : a) d = std::max(d, dist_to_set(x, b));
  for (double x : b) d = std::max(d, dist_to_set(x, a));
  return d;
}

DbarDistance dbar(const SpectrumSet& a, const SpectrumSet& b) {
  if (a.values.empty() || b.values.empty())
    throw InvalidSpecError("resolvent distance undefined for empty spectra");

  auto transform = [](const SpectrumSet& s) {
    std::vector<double> t;
    t.reserve(s.values.size());
    for (double v : s.values) t.push_back(1.0 / (1.0 + v));
    return t;
  };
  const std::vector<double> ta = transform(a);
  const std::vector<double> tb = transform(b);

  // Distance from a point to {points} union [0, tail].
  auto point_dist = [](double x, const std::vector<double>& pts, double tail) {
    double d = x <= tail ? 0.0 : x - tail;
    for (double p : pts) d = std::min(d, std::abs(x - p));
    return d;
  };
  // Directed distance; the tail interval is represented by its endpoints.
  auto directed = [&](const std::vector<double>& pa, double tail_a,
                      const std::vector<double>& pb, double tail_b) {
    double d = 0.0;
    for (double x : pa) d = std::max(d, point_dist(x, pb, tail_b));
    d = std::max(d, point_dist(tail_a, pb, tail_b));
    d = std::max(d, point_dist(0.0, pb, tail_b));
    return d;
  };

  DbarDistance out;
  out.value = std::max(directed(ta, a.tail, tb, b.tail), directed(tb, b.tail, ta, a.tail));
  out.truncation_error = std::max(a.tail, b.tail);
  return out;
}

MatchReport match_eigenvalues(const std::vector<double>& a, const std::vector<double>& b,
                              double eta) {
  if (!(eta > 0)) throw InvalidSpecError("matching threshold eta must be positive");

  struct Cand {
    double gap;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    for (int j = 0; j < static_cast<int>(b.size()); ++j) {
      const double g = std::abs(a[i] - b[j]);
      if (g <= eta) cands.push_back({g, i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.gap != y.gap) return x.gap < y.gap;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });

  MatchReport rep;
  rep.eta = eta;
  std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
  for (const Cand& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = 1;
    rep.pairs.push_back({c.i, c.j, c.gap});
  }
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (!used_a[i]) rep.unpaired_a.push_back(i);
  for (int j = 0; j < static_cast<int>(b.size()); ++j)
    if (!used_b[j]) rep.unpaired_b.push_back(j);
  return rep;
}

}  // namespace magnl
