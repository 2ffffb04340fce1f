#include "seedgrow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "seedgrow/rng.hpp"
#include "text.hpp"

namespace seedgrow {

namespace {

// Keeps the seed-sampling stream independent of the data stream.
constexpr std::uint64_t kSeedStream = 0x5eed5eed5eed5eedULL;

// Moves k uniformly chosen elements of v to its front (partial Fisher-Yates).
void choose_front(std::vector<std::size_t>& v, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(v.size() - i));
    std::swap(v[i], v[j]);
  }
}

std::string join(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += text::format_double(v[i]);
  }
  return out;
}

Vector parse_vector(std::string_view s, const std::string& key) {
  Vector out;
  for (auto tok : text::split(text::trim(s), ' ')) {
    if (text::trim(tok).empty()) continue;
    const auto v = text::parse_double(tok);
    if (!v) throw Error("spec: bad number in '" + key + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

std::size_t BenchmarkSpec::total_rows() const {
  std::size_t total = n_isolated_anomalies + anomalous_size;
  for (std::size_t s : cluster_sizes) total += s;
  return total;
}

void BenchmarkSpec::validate() const {
  if (cluster_centers.empty()) throw Error("spec: no clusters");
  if (cluster_stds.size() != cluster_centers.size() || cluster_sizes.size() != cluster_centers.size()) {
    throw Error("spec: centers, stds and sizes differ in length");
  }
  const std::size_t d = dim();
  if (d == 0) throw Error("spec: zero-dimensional centers");
  for (std::size_t k = 0; k < cluster_centers.size(); ++k) {
    if (cluster_centers[k].size() != d) throw Error("spec: center dimensions differ");
    if (!(cluster_stds[k] > 0.0)) throw Error("spec: cluster std must be positive");
    if (cluster_sizes[k] < 1) throw Error("spec: cluster size must be at least 1");
  }
  if (!isolated_positions.empty() && isolated_positions.size() != n_isolated_anomalies) {
    throw Error("spec: isolated position count differs from n_isolated_anomalies");
  }
  for (const auto& p : isolated_positions) {
    if (p.size() != d) throw Error("spec: isolated position dimension differs");
  }
  if (anomalous_size > 0) {
    if (anomalous_center.size() != d) throw Error("spec: anomalous center dimension differs");
    if (!(anomalous_std > 0.0)) throw Error("spec: anomalous std must be positive");
  }
}

BenchmarkSpec spec_1d(std::uint64_t rng_seed) {
  BenchmarkSpec s;
  s.name = "1d";
  s.rng_seed = rng_seed;
  s.cluster_centers = {{0.0}, {50.0}, {100.0}};
  s.cluster_stds = {1.0, 3.0, 6.0};
  s.cluster_sizes = {10000, 10000, 10000};
  // Left of the first cluster, in the 0..50 gap, and right of the last one;
  // each at least 6 std from every center. The 50..100 gap has no such spot.
  s.isolated_positions = {{-40.0}, {-30.0}, {-20.0}, {-15.0}, {-10.0}, {10.0}, {15.0}, {20.0},
                          {25.0},  {30.0},  {140.0}, {165.0}, {175.0}, {185.0}, {195.0}};
  s.n_isolated_anomalies = s.isolated_positions.size();
  s.anomalous_center = {150.0};
  s.anomalous_std = 0.5;
  s.anomalous_size = 30;
  s.seed_fraction = 0.005;
  s.seed_min_per_cluster = 10;
  s.n_mislabelled_seeds = 3;
  s.seed_rng_seed = rng_seed ^ kSeedStream;
  return s;
}

BenchmarkSpec spec_2d(std::uint64_t rng_seed) {
  BenchmarkSpec s;
  s.name = "2d";
  s.rng_seed = rng_seed;
  // Pairwise center distance >= 6 * (sum of stds) except the last two, which
  // sit 6 apart (5 times their summed std) as the deliberately close pair.
  s.cluster_centers = {{0.0, 0.0},   {25.0, 0.0},  {40.0, 5.0},  {0.0, 30.0},
                       {40.0, 35.0}, {20.0, 40.0}, {-8.0, 15.0}, {-2.0, 15.0}};
  s.cluster_stds = {0.6, 2.0, 0.2, 0.7, 3.0, 0.4, 0.6, 0.6};
  s.cluster_sizes.assign(8, 1250);
  s.n_isolated_anomalies = 250;
  s.isolated_margin = 30.0;
  s.anomalous_center = {11.0, 20.0};
  s.anomalous_std = 0.3;
  s.anomalous_size = 50;
  s.seed_fraction = 0.0097;
  s.seed_min_per_cluster = 10;
  s.n_mislabelled_seeds = 2;
  s.seed_rng_seed = rng_seed ^ kSeedStream;
  return s;
}

Benchmark generate(const BenchmarkSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dim();
  Rng rng(spec.rng_seed);
  std::vector<double> values;
  std::vector<Label> truth;
  values.reserve(spec.total_rows() * d);
  truth.reserve(spec.total_rows());

  for (std::size_t k = 0; k < spec.cluster_centers.size(); ++k) {
    for (std::size_t i = 0; i < spec.cluster_sizes[k]; ++i) {
      for (std::size_t j = 0; j < d; ++j) values.push_back(rng.normal(spec.cluster_centers[k][j], spec.cluster_stds[k]));
      truth.push_back(static_cast<Label>(k));
    }
  }

  if (!spec.isolated_positions.empty()) {
    for (const auto& p : spec.isolated_positions) {
      values.insert(values.end(), p.begin(), p.end());
      truth.push_back(kAnomaly);
    }
  } else {
    Vector lo = spec.cluster_centers.front();
    Vector hi = lo;
    for (const auto& c : spec.cluster_centers) {
      for (std::size_t j = 0; j < d; ++j) {
        lo[j] = std::min(lo[j], c[j]);
        hi[j] = std::max(hi[j], c[j]);
      }
    }
    for (std::size_t i = 0; i < spec.n_isolated_anomalies; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        values.push_back(rng.uniform(lo[j] - spec.isolated_margin, hi[j] + spec.isolated_margin));
      }
      truth.push_back(kAnomaly);
    }
  }

  for (std::size_t i = 0; i < spec.anomalous_size; ++i) {
    for (std::size_t j = 0; j < d; ++j) values.push_back(rng.normal(spec.anomalous_center[j], spec.anomalous_std));
    truth.push_back(kAnomaly);
  }

  return {Dataset(d, std::move(values), std::move(truth)), spec};
}

SeedSample sample_seeds(const Dataset& data, double fraction, std::size_t min_per_cluster,
                        std::size_t n_mislabelled, std::uint64_t rng_seed) {
  if (!data.has_truth()) throw Error("seed sampling needs truth labels");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("seed fraction must be in (0, 1]");
  const auto& truth = data.truth();

  std::map<Label, std::vector<std::size_t>> by_class;
  std::size_t labelled = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != kAnomaly) {
      by_class[truth[i]].push_back(i);
      ++labelled;
    }
  }
  if (by_class.empty()) throw Error("infeasible seed quotas: no labelled points");
  const std::size_t classes = by_class.size();
  const double wanted = fraction * static_cast<double>(data.size());
  if (wanted < static_cast<double>(min_per_cluster * classes)) {
    throw Error("infeasible seed quotas: fraction too small for the per-cluster minimum");
  }
  for (const auto& [c, ids] : by_class) {
    if (ids.size() < min_per_cluster) {
      throw Error("infeasible seed quotas: cluster " + std::to_string(c) + " is smaller than the minimum");
    }
  }
  const std::size_t total = std::min(labelled, static_cast<std::size_t>(std::llround(wanted)));
  if (n_mislabelled > total) throw Error("infeasible seed quotas: more mislabelled seeds than seeds");
  if (n_mislabelled > 0 && classes < 2) throw Error("infeasible seed quotas: mislabelling needs two clusters");

  Rng rng(rng_seed);
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> rest;
  for (auto& [c, ids] : by_class) {
    choose_front(ids, min_per_cluster, rng);
    chosen.insert(chosen.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(min_per_cluster));
    rest.insert(rest.end(), ids.begin() + static_cast<std::ptrdiff_t>(min_per_cluster), ids.end());
  }
  std::sort(rest.begin(), rest.end());
  const std::size_t extra = total - chosen.size();
  choose_front(rest, extra, rng);
  chosen.insert(chosen.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra));
  std::sort(chosen.begin(), chosen.end());

  SeedSample out;
  for (std::size_t id : chosen) out.seeds.entries.emplace(id, truth[id]);

  std::vector<Label> ids;
  for (const auto& kv : by_class) ids.push_back(kv.first);
  std::vector<std::size_t> pick = chosen;
  choose_front(pick, n_mislabelled, rng);
  out.mislabelled.assign(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n_mislabelled));
  std::sort(out.mislabelled.begin(), out.mislabelled.end());
  for (std::size_t id : out.mislabelled) {
    const Label own = truth[id];
    std::vector<Label> others;
    for (Label c : ids) {
      if (c != own) others.push_back(c);
    }
    out.seeds.entries[id] = others[static_cast<std::size_t>(rng.below(others.size()))];
  }
  return out;
}

SeedSample sample_seeds(const Benchmark& bench) {
  const auto& s = bench.spec;
  return sample_seeds(bench.data, s.seed_fraction, s.seed_min_per_cluster, s.n_mislabelled_seeds, s.seed_rng_seed);
}

std::string format_spec(const BenchmarkSpec& s) {
  std::ostringstream out;
  out << "# seedgrow synthetic benchmark\n";
  out << "name = " << s.name << '\n';
  out << "rng_seed = " << s.rng_seed << '\n';
  out << "dimension = " << s.dim() << '\n';
  out << "cluster_count = " << s.cluster_centers.size() << '\n';
  for (std::size_t k = 0; k < s.cluster_centers.size(); ++k) {
    out << "cluster_" << k << "_center = " << join(s.cluster_centers[k]) << '\n';
    out << "cluster_" << k << "_std = " << text::format_double(s.cluster_stds[k]) << '\n';
    out << "cluster_" << k << "_size = " << s.cluster_sizes[k] << '\n';
  }
  out << "isolated_count = " << s.n_isolated_anomalies << '\n';
  out << "isolated_margin = " << text::format_double(s.isolated_margin) << '\n';
  for (std::size_t i = 0; i < s.isolated_positions.size(); ++i) {
    out << "isolated_" << i << " = " << join(s.isolated_positions[i]) << '\n';
  }
  out << "anomalous_center = " << join(s.anomalous_center) << '\n';
  out << "anomalous_std = " << text::format_double(s.anomalous_std) << '\n';
  out << "anomalous_size = " << s.anomalous_size << '\n';
  out << "seed_fraction = " << text::format_double(s.seed_fraction) << '\n';
  out << "seed_min_per_cluster = " << s.seed_min_per_cluster << '\n';
  out << "seed_mislabelled = " << s.n_mislabelled_seeds << '\n';
  out << "seed_rng_seed = " << s.seed_rng_seed << '\n';
  out << "total_rows = " << s.total_rows() << '\n';
  return out.str();
}

BenchmarkSpec parse_spec(const std::string& body) {
  std::map<std::string, std::string> kv;
  for (auto raw : text::lines(body)) {
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error("spec: line without '=': " + std::string(line));
    kv[std::string(text::trim(line.substr(0, eq)))] = std::string(text::trim(line.substr(eq + 1)));
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error("spec: missing key '" + key + "'");
    return it->second;
  };
  auto get_u64 = [&](const std::string& key) {
    const auto v = text::parse_int<std::uint64_t>(get(key));
    if (!v) throw Error("spec: bad integer in '" + key + "'");
    return *v;
  };
  auto get_double = [&](const std::string& key) {
    const auto v = text::parse_double(get(key));
    if (!v) throw Error("spec: bad number in '" + key + "'");
    return *v;
  };

  BenchmarkSpec s;
  s.name = get("name");
  s.rng_seed = get_u64("rng_seed");
  const std::size_t clusters = get_u64("cluster_count");
  for (std::size_t k = 0; k < clusters; ++k) {
    const std::string p = "cluster_" + std::to_string(k) + "_";
    s.cluster_centers.push_back(parse_vector(get(p + "center"), p + "center"));
    s.cluster_stds.push_back(get_double(p + "std"));
    s.cluster_sizes.push_back(get_u64(p + "size"));
  }
  s.n_isolated_anomalies = get_u64("isolated_count");
  s.isolated_margin = get_double("isolated_margin");
  for (std::size_t i = 0; kv.count("isolated_" + std::to_string(i)); ++i) {
    const std::string key = "isolated_" + std::to_string(i);
    s.isolated_positions.push_back(parse_vector(get(key), key));
  }
  s.anomalous_center = parse_vector(get("anomalous_center"), "anomalous_center");
  s.anomalous_std = get_double("anomalous_std");
  s.anomalous_size = get_u64("anomalous_size");
  s.seed_fraction = get_double("seed_fraction");
  s.seed_min_per_cluster = get_u64("seed_min_per_cluster");
  s.n_mislabelled_seeds = get_u64("seed_mislabelled");
  s.seed_rng_seed = get_u64("seed_rng_seed");
  s.validate();
  return s;
}

}  // namespace seedgrow
