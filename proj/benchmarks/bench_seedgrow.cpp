// Timings for the kernel fit, single passes and full runs on the synthetic
// benchmarks.

#include <algorithm>
#include <vector>

#include <benchmark/benchmark.h>

#include "seedgrow/engine.hpp"
#include "seedgrow/perception.hpp"
#include "seedgrow/rng.hpp"
#include "seedgrow/synth.hpp"

namespace {

using namespace seedgrow;

std::vector<double> normal_deviations(std::size_t n) {
  Rng rng(n);
  std::vector<double> d(n);
  for (double& v : d) v = std::abs(rng.normal());
  std::sort(d.begin(), d.end());
  return d;
}

void BM_FitSorted(benchmark::State& state) {
  const auto d = normal_deviations(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_sorted(Vector{0.0}, d));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitSorted)->RangeMultiplier(10)->Range(10, 100000);

void BM_Fit2d(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  std::vector<double> values(2 * n);
  for (double& v : values) v = rng.normal();
  const Dataset data(2, std::move(values));
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(data, ids));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fit2d)->RangeMultiplier(10)->Range(100, 100000);

void BM_Generate1d(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_1d(42));
  }
}
BENCHMARK(BM_Generate1d)->Unit(benchmark::kMillisecond);

void BM_Run(benchmark::State& state, Benchmark (*make)(std::uint64_t), std::uint64_t seed, std::size_t max_iter) {
  const Benchmark b = make(seed);
  const SeedAssignment seeds = sample_seeds(b).seeds;
  std::size_t passes = 0;
  for (auto _ : state) {
    const RunResult r = run(b.data, seeds, max_iter);
    passes = r.report.passes;
    benchmark::DoNotOptimize(r.assignment.labels.data());
  }
  state.counters["passes"] = static_cast<double>(passes);
  state.counters["rows"] = static_cast<double>(b.data.size());
}
BENCHMARK_CAPTURE(BM_Run, one_pass_1d, gen_1d, 42, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, full_1d, gen_1d, 42, kDefaultMaxIterations)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, one_pass_2d, gen_2d, 7, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, full_2d, gen_2d, 7, kDefaultMaxIterations)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
