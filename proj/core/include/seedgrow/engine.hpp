#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seedgrow/perception.hpp"
#include "seedgrow/types.hpp"

namespace seedgrow {

inline constexpr std::size_t kDefaultMaxIterations = 1000;

// User-asserted labels: point id -> cluster id.
struct SeedAssignment {
  std::map<std::size_t, Label> entries;

  bool operator==(const SeedAssignment&) const = default;
};

struct ClusterAssignment {
  std::vector<Label> labels;
  std::vector<double> scores;
  std::map<Label, PerceptionModel> models;
};

enum class Convergence { yes, no, cycle };

std::string to_string(Convergence c);
Convergence convergence_from_string(const std::string& s);

struct ClusterStats {
  Label id = kAnomaly;
  std::size_t size = 0;
  double mu = 0.0;
  double cutoff = 0.0;
};

struct RunReport {
  std::size_t passes = 0;
  Convergence converged = Convergence::no;
  std::size_t ejected_total = 0;
  std::size_t absorbed_total = 0;
  std::vector<ClusterStats> per_cluster;
  std::vector<Label> vanished;  // seeded clusters that lost every member
};

struct RunResult {
  ClusterAssignment assignment;
  RunReport report;
};

// Cluster ids ordered by mean squared deviation of their current members,
// tightest first, ties by ascending id. Empty clusters are skipped.
std::vector<Label> order_clusters(const Dataset& data, std::span<const Label> labels);

// Grows clusters from the seeds: every pass visits clusters in concentration
// order; each one ejects its anomalies, re-fits, and absorbs pool points that
// the re-fitted model accepts. Stops on a pass without edits, on a repeated
// label state, or after max_iterations passes.
RunResult run(const Dataset& data, const SeedAssignment& seeds,
              std::size_t max_iterations = kDefaultMaxIterations);

// Best-scoring cluster for a new point, or -1 when every model flags it.
std::pair<Label, double> assign_new(const std::map<Label, PerceptionModel>& models,
                                    std::span<const double> x);

}  // namespace seedgrow
