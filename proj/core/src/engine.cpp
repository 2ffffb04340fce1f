#include "seedgrow/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <tuple>

#include "seedgrow/geometry.hpp"

namespace seedgrow {

namespace {

using Members = std::map<Label, std::vector<std::size_t>>;

// Two independent 64-bit hashes of the label vector. A repeat of both is
// treated as a repeated state.
std::pair<std::uint64_t, std::uint64_t> fingerprint(const std::vector<Label>& labels) {
  std::uint64_t fnv = 0xcbf29ce484222325ULL;
  std::uint64_t mix = 0x9e3779b97f4a7c15ULL;
  for (Label l : labels) {
    const auto v = static_cast<std::uint64_t>(static_cast<std::int64_t>(l));
    for (int b = 0; b < 4; ++b) {
      fnv ^= (v >> (8 * b)) & 0xffU;
      fnv *= 0x100000001b3ULL;
    }
    std::uint64_t z = mix + v + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    mix = z ^ (z >> 31);
  }
  return {fnv, mix};
}

std::vector<Label> order_members(const Dataset& data, const Members& members) {
  std::vector<std::pair<double, Label>> keyed;
  for (const auto& [id, ids] : members) {
    if (!ids.empty()) keyed.emplace_back(mean_squared_deviation(data, ids), id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<Label> order;
  order.reserve(keyed.size());
  for (const auto& kv : keyed) order.push_back(kv.second);
  return order;
}

// Removes from `from` (sorted) every id present in `drop` (sorted).
void subtract_sorted(std::vector<std::size_t>& from, const std::vector<std::size_t>& drop) {
  std::vector<std::size_t> out;
  out.reserve(from.size() - std::min(from.size(), drop.size()));
  std::set_difference(from.begin(), from.end(), drop.begin(), drop.end(), std::back_inserter(out));
  from.swap(out);
}

void merge_sorted(std::vector<std::size_t>& into, const std::vector<std::size_t>& add) {
  std::vector<std::size_t> out;
  out.reserve(into.size() + add.size());
  std::merge(into.begin(), into.end(), add.begin(), add.end(), std::back_inserter(out));
  into.swap(out);
}

}  // namespace

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::yes: return "yes";
    case Convergence::no: return "no";
    case Convergence::cycle: return "cycle";
  }
  return "no";
}

Convergence convergence_from_string(const std::string& s) {
  if (s == "yes") return Convergence::yes;
  if (s == "no") return Convergence::no;
  if (s == "cycle") return Convergence::cycle;
  throw Error("unknown convergence value '" + s + "'");
}

std::vector<Label> order_clusters(const Dataset& data, std::span<const Label> labels) {
  if (labels.size() != data.size()) throw Error("labels length differs from dataset size");
  Members members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kAnomaly) members[labels[i]].push_back(i);
  }
  auto order = order_members(data, members);
  if (order.empty()) throw Error("no seeded clusters remain");
  return order;
}

RunResult run(const Dataset& data, const SeedAssignment& seeds, std::size_t max_iterations) {
  if (seeds.entries.empty()) throw Error("no seeds");
  if (max_iterations < 1) throw Error("max_iterations must be at least 1");
  const std::size_t n = data.size();

  std::vector<Label> labels(n, kAnomaly);
  Members members;
  for (const auto& [id, cluster] : seeds.entries) {
    if (id >= n) throw Error("seed references unknown point id " + std::to_string(id));
    if (cluster < 0) throw Error("seed cluster ids must be non-negative");
    labels[id] = cluster;
    members[cluster].push_back(id);  // map iteration keeps ids ascending
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == kAnomaly) pool.push_back(i);
  }

  RunResult result;
  RunReport& report = result.report;
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen{fingerprint(labels)};

  std::vector<std::size_t> ejected;
  std::vector<std::size_t> absorbed;
  while (true) {
    ++report.passes;
    std::size_t edits = 0;
    for (Label c : order_members(data, members)) {
      auto& own = members[c];
      PerceptionModel model = fit(data, own);

      ejected.clear();
      for (std::size_t id : own) {
        if (euclidean_distance(data.point(id), model.median) > model.cutoff) ejected.push_back(id);
      }
      if (!ejected.empty()) {
        for (std::size_t id : ejected) labels[id] = kAnomaly;
        subtract_sorted(own, ejected);
        merge_sorted(pool, ejected);
        report.ejected_total += ejected.size();
        edits += ejected.size();
        if (own.empty()) continue;
        model = fit(data, own);
      }

      absorbed.clear();
      for (std::size_t id : pool) {
        if (euclidean_distance(data.point(id), model.median) <= model.cutoff) absorbed.push_back(id);
      }
      if (!absorbed.empty()) {
        for (std::size_t id : absorbed) labels[id] = c;
        subtract_sorted(pool, absorbed);
        merge_sorted(own, absorbed);
        report.absorbed_total += absorbed.size();
        edits += absorbed.size();
      }
    }

    if (edits == 0) {
      report.converged = Convergence::yes;
      break;
    }
    if (!seen.insert(fingerprint(labels)).second) {
      report.converged = Convergence::cycle;
      break;
    }
    if (report.passes >= max_iterations) {
      report.converged = Convergence::no;
      break;
    }
  }

  // Final re-fit is scoring only; labels stay as the loop left them.
  ClusterAssignment& out = result.assignment;
  for (const auto& [c, own] : members) {
    if (own.empty()) {
      report.vanished.push_back(c);
      continue;
    }
    const PerceptionModel model = fit(data, own);
    report.per_cluster.push_back({c, own.size(), model.mu, model.cutoff});
    out.models.emplace(c, model);
  }
  out.scores.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = data.point(i);
    if (labels[i] != kAnomaly) {
      out.scores[i] = classify(out.models.at(labels[i]), p).score;
    } else {
      double best = 0.0;
      for (const auto& [c, model] : out.models) best = std::max(best, classify(model, p).score);
      out.scores[i] = best;
    }
  }
  out.labels = std::move(labels);
  return result;
}

std::pair<Label, double> assign_new(const std::map<Label, PerceptionModel>& models,
                                    std::span<const double> x) {
  if (models.empty()) throw Error("no cluster models");
  Label best_id = kAnomaly;
  double best = -1.0;
  for (const auto& [c, model] : models) {
    const double e = classify(model, x).score;
    if (e > best) {
      best = e;
      best_id = c;
    }
  }
  if (best < 1.0) return {kAnomaly, best};
  return {best_id, best};
}

}  // namespace seedgrow
