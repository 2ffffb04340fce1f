#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "seedgrow/engine.hpp"
#include "seedgrow/types.hpp"

namespace seedgrow {

// Every constant needed to regenerate a synthetic benchmark. Written next to
// the data so a run can be reproduced and scored without this source.
struct BenchmarkSpec {
  std::string name;
  std::uint64_t rng_seed = 0;
  std::vector<Vector> cluster_centers;
  std::vector<double> cluster_stds;
  std::vector<std::size_t> cluster_sizes;
  // Isolated anomalies sit at fixed positions when listed; otherwise they are
  // drawn uniformly over the centers' bounding box widened by the margin.
  std::size_t n_isolated_anomalies = 0;
  std::vector<Vector> isolated_positions;
  double isolated_margin = 0.0;
  Vector anomalous_center;
  double anomalous_std = 0.0;
  std::size_t anomalous_size = 0;
  // Seed sampling used by `generate` and the acceptance fixtures.
  double seed_fraction = 0.0;
  std::size_t seed_min_per_cluster = 0;
  std::size_t n_mislabelled_seeds = 0;
  std::uint64_t seed_rng_seed = 0;

  std::size_t dim() const { return cluster_centers.empty() ? 0 : cluster_centers.front().size(); }
  std::size_t total_rows() const;
  void validate() const;

  bool operator==(const BenchmarkSpec&) const = default;
};

struct Benchmark {
  Dataset data;
  BenchmarkSpec spec;
};

// Three 1-D Gaussians (centers 0/50/100, stds 1/3/6, 10000 points each), 15
// isolated anomalies at least 6 std from every center and a 30-point
// anomalous cluster at 150.
BenchmarkSpec spec_1d(std::uint64_t rng_seed);
// Eight 2-D Gaussians of 1250 points, 250 uniform isolated anomalies and a
// 50-point anomalous cluster at (11, 20); 10300 rows.
BenchmarkSpec spec_2d(std::uint64_t rng_seed);

Benchmark generate(const BenchmarkSpec& spec);
inline Benchmark gen_1d(std::uint64_t rng_seed) { return generate(spec_1d(rng_seed)); }
inline Benchmark gen_2d(std::uint64_t rng_seed) { return generate(spec_2d(rng_seed)); }

struct SeedSample {
  SeedAssignment seeds;
  std::vector<std::size_t> mislabelled;  // ids whose seed label is wrong
};

// Draws round(fraction * rows) seeds from non-anomalous truth classes: first
// min_per_cluster uniformly inside each class, the rest uniformly among the
// remaining labelled points. n_mislabelled of the seeds then get a random
// different cluster id. Never seeds a truth-anomaly.
SeedSample sample_seeds(const Dataset& data, double fraction, std::size_t min_per_cluster,
                        std::size_t n_mislabelled, std::uint64_t rng_seed);
SeedSample sample_seeds(const Benchmark& bench);

// Key-value text form of a spec ("key = value", vectors space separated).
std::string format_spec(const BenchmarkSpec& spec);
BenchmarkSpec parse_spec(const std::string& text);

}  // namespace seedgrow
