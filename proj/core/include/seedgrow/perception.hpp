#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seedgrow/types.hpp"

namespace seedgrow {

// Uniform-noise model over Euclidean deviations from a cluster's median.
//
// A point is an anomaly when its expectation of occurrence is below one: the
// expected number of times a spacing that large would show up among n points
// spread uniformly over [0, support].
struct PerceptionModel {
  Vector median;
  std::size_t n = 0;
  double mu = 0.0;        // mean deviation from the median
  double support = 0.0;   // 2 * mu, the estimated uniform support
  double gap_star = 0.0;  // spacing with expectation exactly one
  double edge = 0.0;      // largest deviation kept after the tail cut
  double cutoff = 0.0;    // members satisfy d <= cutoff

  // Deviations up to this point score the full expectation n.
  double shoulder() const { return cutoff - gap_star; }

  bool operator==(const PerceptionModel&) const = default;
};

enum class Verdict { member, anomaly };

struct Classification {
  Verdict verdict;
  double score;
};

// Number of retained deviations that must fall within one gap below the edge
// for that gap to count as locally unusual: the smallest c with
// 2^c > n(n-1)/2. The same count sizes the window used to measure the local
// spacing at the edge.
std::size_t local_window(std::size_t n);

// Growth allowance when the retained deviations are sorted[0..kept-1]:
// the local spacing near the edge scaled by ln(n), never below gap_star and
// never above three times gap_star.
double edge_allowance(std::span<const double> sorted, std::size_t kept, double gap_star);

// Fits on sorted deviations (ascending). Exposed for tests and benchmarks.
PerceptionModel fit_sorted(Vector median, std::span<const double> sorted);

PerceptionModel fit(const Dataset& data, std::span<const std::size_t> ids);
PerceptionModel fit(const std::vector<Vector>& points);

// Expected number of occurrences of deviation d. Always < 1 exactly when
// d > cutoff, so the score and the verdict never disagree.
double expectation(const PerceptionModel& model, double d);

Classification classify(const PerceptionModel& model, std::span<const double> x);

}  // namespace seedgrow
