#include "seedgrow/evaluation.hpp"

#include <cstdio>
#include <sstream>

#include "seedgrow/geometry.hpp"
#include "text.hpp"

namespace seedgrow {

namespace {

std::string optional_text(const std::optional<double>& v) {
  return v ? text::format_double(*v) : std::string("undefined");
}

std::string short_text(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

EvalReport evaluate(std::span<const Label> pred, std::span<const Label> truth) {
  if (pred.size() != truth.size()) throw Error("prediction and truth lengths differ");
  EvalReport r;
  r.n = pred.size();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++r.confusion[{truth[i], pred[i]}];
    auto& t = r.per_class[truth[i]];
    ++t.truth_count;
    ++r.per_class[pred[i]].predicted_count;
    if (pred[i] == truth[i]) {
      ++agree;
      ++t.correct;
    }
  }
  r.accuracy = r.n == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(r.n);
  for (auto& [label, s] : r.per_class) {
    if (s.predicted_count > 0) s.precision = static_cast<double>(s.correct) / static_cast<double>(s.predicted_count);
    if (s.truth_count > 0) s.recall = static_cast<double>(s.correct) / static_cast<double>(s.truth_count);
  }
  return r;
}

std::vector<std::optional<double>> cluster_recovery(std::span<const Label> pred, std::span<const Label> truth,
                                                    const Dataset& data, const BenchmarkSpec& spec,
                                                    double radius_in_stds) {
  spec.validate();
  if (pred.size() != data.size() || truth.size() != data.size()) {
    throw Error("prediction, truth and dataset lengths differ");
  }
  if (data.dim() != spec.dim()) throw Error("spec dimension differs from dataset");
  if (radius_in_stds < 0.0) throw Error("radius must be non-negative");
  const std::size_t clusters = spec.cluster_centers.size();
  std::vector<std::size_t> core(clusters, 0);
  std::vector<std::size_t> hit(clusters, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Label t = truth[i];
    if (t == kAnomaly) continue;
    if (t < 0 || static_cast<std::size_t>(t) >= clusters) {
      throw Error("truth label " + std::to_string(t) + " is not a cluster of the spec");
    }
    const auto k = static_cast<std::size_t>(t);
    if (euclidean_distance(data.point(i), spec.cluster_centers[k]) <= radius_in_stds * spec.cluster_stds[k]) {
      ++core[k];
      if (pred[i] == t) ++hit[k];
    }
  }
  std::vector<std::optional<double>> out(clusters);
  for (std::size_t k = 0; k < clusters; ++k) {
    if (core[k] > 0) out[k] = static_cast<double>(hit[k]) / static_cast<double>(core[k]);
  }
  return out;
}

std::string format_eval_table(const EvalReport& r) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "points   %zu\naccuracy %.6f\n\n", r.n, r.accuracy);
  out << line;
  std::snprintf(line, sizeof line, "%8s %10s %10s %10s %10s\n", "label", "truth", "predicted", "precision",
                "recall");
  out << line;
  for (const auto& [label, s] : r.per_class) {
    std::snprintf(line, sizeof line, "%8d %10zu %10zu %10s %10s\n", label, s.truth_count, s.predicted_count,
                  short_text(s.precision).c_str(), short_text(s.recall).c_str());
    out << line;
  }
  return out.str();
}

std::string format_eval_kv(const EvalReport& r) {
  std::ostringstream out;
  out << "n = " << r.n << '\n';
  out << "accuracy = " << text::format_double(r.accuracy) << '\n';
  for (const auto& [label, s] : r.per_class) {
    const std::string p = "class_" + std::to_string(label) + "_";
    out << p << "truth = " << s.truth_count << '\n';
    out << p << "predicted = " << s.predicted_count << '\n';
    out << p << "precision = " << optional_text(s.precision) << '\n';
    out << p << "recall = " << optional_text(s.recall) << '\n';
  }
  for (const auto& [key, count] : r.confusion) {
    out << "confusion_" << key.first << "_" << key.second << " = " << count << '\n';
  }
  return out.str();
}

}  // namespace seedgrow
