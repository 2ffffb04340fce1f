#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seedgrow/engine.hpp"
#include "seedgrow/synth.hpp"
#include "seedgrow/types.hpp"

namespace seedgrow {

struct ClassStats {
  std::size_t truth_count = 0;
  std::size_t predicted_count = 0;
  std::size_t correct = 0;
  // Undefined (empty) when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
};

// Agreement with ground truth, with -1 treated as an ordinary class. Cluster
// ids come from the seeds, so no label matching is needed.
struct EvalReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  std::map<Label, ClassStats> per_class;
  std::map<std::pair<Label, Label>, std::size_t> confusion;  // (truth, predicted) -> count
};

EvalReport evaluate(std::span<const Label> pred, std::span<const Label> truth);
inline EvalReport evaluate(const ClusterAssignment& pred, std::span<const Label> truth) {
  return evaluate(pred.labels, truth);
}

// For each true cluster k: share of points within radius_in_stds * std of
// its center that were labelled k. Undefined when no point is that close.
std::vector<std::optional<double>> cluster_recovery(std::span<const Label> pred, std::span<const Label> truth,
                                                    const Dataset& data, const BenchmarkSpec& spec,
                                                    double radius_in_stds);

std::string format_eval_table(const EvalReport& report);
std::string format_eval_kv(const EvalReport& report);

}  // namespace seedgrow
