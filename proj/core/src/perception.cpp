#include "seedgrow/perception.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "seedgrow/geometry.hpp"

namespace seedgrow {

namespace {

// 1 - n^(-1/(n-1)) without cancellation for large n.
double gap_fraction(std::size_t n) {
  if (n < 2) return 0.0;
  const double nd = static_cast<double>(n);
  return -std::expm1(-std::log(nd) / (nd - 1.0));
}

// Smallest kept count j whose tail (n - j points) satisfies (n - j)^2 <= n:
// a tail is only ever a small minority of the fitted points.
std::size_t first_rare_cut(std::size_t n) {
  std::size_t tail = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while ((tail + 1) * (tail + 1) <= n) ++tail;
  while (tail * tail > n) --tail;
  return n - tail;
}

}  // namespace

std::size_t local_window(std::size_t n) {
  const std::uint64_t m = n;
  const std::uint64_t pairs = m < 2 ? 0 : m * (m - 1) / 2;
  return static_cast<std::size_t>(std::bit_width(pairs));
}

double edge_allowance(std::span<const double> sorted, std::size_t kept, double gap_star) {
  const std::size_t n = sorted.size();
  const std::size_t k = local_window(n);
  double spacing = 0.0;
  if (k > 0 && kept >= k) {
    const double reach = sorted[kept - 1] - sorted[kept - k];
    spacing = reach * std::log(static_cast<double>(n)) / static_cast<double>(k);
  }
  return std::max(gap_star, std::min(spacing, 3.0 * gap_star));
}

PerceptionModel fit_sorted(Vector median, std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n == 0) throw Error("empty cluster");

  PerceptionModel m;
  m.median = std::move(median);
  m.n = n;
  double acc = 0.0;
  for (double d : sorted) acc += d;
  m.mu = acc / static_cast<double>(n);
  m.support = 2.0 * m.mu;
  m.gap_star = m.support * gap_fraction(n);

  const double g = m.gap_star;
  const std::size_t k = local_window(n);
  std::size_t kept = n;
  for (std::size_t j = std::max<std::size_t>(1, first_rare_cut(n)); j < n; ++j) {
    const double lo = sorted[j - 1];
    const double hi = sorted[j];
    if (!(hi > lo + g)) continue;
    // The first cut point must lie beyond the whole uniform support.
    if (!(hi > m.support)) continue;
    if (!(hi > lo + edge_allowance(sorted, j, g))) continue;
    // Enough retained points sit within one gap below the edge that a gap
    // this wide is unlikely to arise by chance among n(n-1)/2 comparisons.
    const double gap = hi - lo;
    const auto first = std::lower_bound(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(j),
                                        lo - gap);
    const auto close = static_cast<std::size_t>(sorted.begin() + static_cast<std::ptrdiff_t>(j) - first);
    if (close < k) continue;
    kept = j;
    break;
  }

  m.edge = sorted[kept - 1];
  m.cutoff = m.edge + edge_allowance(sorted, kept, g);
  return m;
}

PerceptionModel fit(const Dataset& data, std::span<const std::size_t> ids) {
  Vector median = coordinate_median(data, ids);
  std::vector<double> d(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) d[i] = euclidean_distance(data.point(ids[i]), median);
  std::sort(d.begin(), d.end());
  return fit_sorted(std::move(median), d);
}

PerceptionModel fit(const std::vector<Vector>& points) {
  if (points.empty()) throw Error("empty cluster");
  const Dataset data = Dataset::from_rows(points);
  std::vector<std::size_t> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return fit(data, ids);
}

double expectation(const PerceptionModel& model, double d) {
  if (!(d >= 0.0)) throw Error("deviation must be non-negative");
  const double n = static_cast<double>(model.n);
  const double excess = d - model.shoulder();
  double e;
  if (excess <= 0.0) {
    e = n;
  } else if (model.support <= 0.0) {
    e = 0.0;
  } else {
    const double frac = 1.0 - excess / model.support;
    e = frac <= 0.0 ? 0.0 : n * std::pow(frac, n - 1.0);
  }
  // Rounding near the cutoff must not let the score contradict the verdict.
  const bool member = d <= model.cutoff;
  if (member && e < 1.0) e = 1.0;
  if (!member && e >= 1.0) e = std::nextafter(1.0, 0.0);
  return e;
}

Classification classify(const PerceptionModel& model, std::span<const double> x) {
  const double d = euclidean_distance(x, model.median);
  const Verdict v = d > model.cutoff ? Verdict::anomaly : Verdict::member;
  return {v, expectation(model, d)};
}

}  // namespace seedgrow
