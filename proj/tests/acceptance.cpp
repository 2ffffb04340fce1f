// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "seedgrow/engine.hpp"
#include "seedgrow/evaluation.hpp"
#include "seedgrow/io.hpp"
#include "seedgrow/perception.hpp"
#include "seedgrow/synth.hpp"

using namespace seedgrow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Row ranges of a generated benchmark: clusters, then isolated anomalies,
// then the anomalous cluster.
struct Layout {
  std::size_t iso_begin, iso_end, anom_begin, anom_end;
};

Layout layout(const BenchmarkSpec& s) {
  const std::size_t clusters = std::accumulate(s.cluster_sizes.begin(), s.cluster_sizes.end(), std::size_t{0});
  return {clusters, clusters + s.n_isolated_anomalies, clusters + s.n_isolated_anomalies,
          clusters + s.n_isolated_anomalies + s.anomalous_size};
}

double min_recovery(const RunResult& r, const Benchmark& b) {
  const auto rec = cluster_recovery(r.assignment.labels, b.data.truth(), b.data, b.spec, 2.0);
  double lo = 1.0;
  for (const auto& v : rec) lo = std::min(lo, v.value_or(0.0));
  return lo;
}

// Every member is accepted by its own final model and every -1 point is
// rejected by all of them.
bool is_fixed_point(const Dataset& d, const ClusterAssignment& a, std::size_t* violations) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Label l = a.labels[i];
    if (l != kAnomaly) {
      bad += classify(a.models.at(l), d.point(i)).verdict != Verdict::member;
    } else {
      for (const auto& [id, m] : a.models) bad += classify(m, d.point(i)).verdict != Verdict::anomaly;
    }
  }
  *violations = bad;
  return bad == 0;
}

Outcome criterion_1() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_int_distribution<int> size(1, 12);
  std::size_t mismatches = 0, with_tail = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> xs(static_cast<std::size_t>(size(gen)));
    switch (trial % 4) {
      case 0:  // uniform over the whole range
        for (double& x : xs) x = u(gen);
        break;
      case 1:  // a tight group with one or two far points
        for (double& x : xs) x = u(gen) / 50.0;
        xs.back() = u(gen) < 0 ? -100.0 : 100.0;
        if (xs.size() > 3 && trial % 8 == 1) xs[0] = u(gen);
        break;
      case 2:  // coarse integers with ties
        for (double& x : xs) x = std::round(u(gen) / 25.0);
        break;
      default:  // two groups
        for (std::size_t i = 0; i < xs.size(); ++i)
          xs[i] = (i % 3 == 0 ? 60.0 : -20.0) + u(gen) / 40.0;
        break;
    }
    std::vector<Vector> pts;
    for (double x : xs) pts.push_back({x});
    const PerceptionModel m = fit(pts);
    std::set<std::size_t> tail;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::fabs(xs[i] - m.median[0]) > m.cutoff) tail.insert(i);
    }
    const oracle::Fit o = oracle::fit(xs);
    mismatches += tail != o.tail;
    with_tail += !o.tail.empty();
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 1.0, "500 instances, " + std::to_string(mismatches) + " mismatches, " +
                                             std::to_string(with_tail) + " with a tail, " + fmt("%.3f s", secs)};
}

Outcome criterion_2() {
  const Dataset d = fixtures::toy();
  const RunResult r = run(d, fixtures::toy_seeds());
  const double ca = r.assignment.models.at(fixtures::kA).cutoff;
  const double cb = r.assignment.models.at(fixtures::kB).cutoff;
  const double exact = fixtures::toy_final_cutoff();
  const bool cut_ok = std::fabs(ca - exact) <= 1e-9 && std::fabs(cb - exact) <= 1e-9 &&
                      std::fabs(ca - 0.5629) < 5e-5 && std::fabs(cb - 0.5629) < 5e-5;
  const bool ok = r.report.converged == Convergence::yes && r.report.passes <= 3 && r.assignment.labels == d.truth() &&
                  cut_ok;
  return {ok, std::to_string(r.report.passes) + " passes, converged " + to_string(r.report.converged) +
                  ", labels " + (r.assignment.labels == d.truth() ? "match" : "differ") + ", cutoffs " +
                  fmt("%.10f", ca) + " / " + fmt("%.10f", cb)};
}

Outcome criterion_3(RunResult* keep, Benchmark* bench) {
  const auto t0 = Clock::now();
  Benchmark b = gen_1d(42);
  const SeedSample s = sample_seeds(b);
  RunResult r = run(b.data, s.seeds);
  const double secs = seconds_since(t0);

  std::size_t truth_anom = 0, caught = 0;
  for (std::size_t i = 0; i < b.data.size(); ++i) {
    if (b.data.truth()[i] != kAnomaly) continue;
    ++truth_anom;
    caught += r.assignment.labels[i] == kAnomaly;
  }
  std::size_t ejected = 0;
  for (std::size_t id : s.mislabelled) ejected += r.assignment.labels[id] != s.seeds.entries.at(id);
  const double rec = min_recovery(r, b);
  const bool ok = truth_anom == 45 && caught == 45 && ejected == s.mislabelled.size() && rec >= 0.95 && secs < 10.0;
  Outcome o{ok, std::to_string(caught) + "/" + std::to_string(truth_anom) + " anomalies labelled -1, " +
                    std::to_string(ejected) + "/" + std::to_string(s.mislabelled.size()) +
                    " mislabelled seeds ejected, min recovery " + fmt("%.4f", rec) + ", " + fmt("%.2f s", secs)};
  *keep = std::move(r);
  *bench = std::move(b);
  return o;
}

Outcome criterion_4(RunResult* keep, Benchmark* bench) {
  const auto t0 = Clock::now();
  Benchmark b = gen_2d(7);
  const SeedSample s = sample_seeds(b);
  RunResult r = run(b.data, s.seeds);
  const double secs = seconds_since(t0);

  const Layout L = layout(b.spec);
  bool seeds_clear = true;
  for (const auto& [id, c] : s.seeds.entries) seeds_clear = seeds_clear && b.data.truth()[id] != kAnomaly;
  std::size_t anom = 0, iso = 0;
  for (std::size_t i = L.anom_begin; i < L.anom_end; ++i) anom += r.assignment.labels[i] == kAnomaly;
  for (std::size_t i = L.iso_begin; i < L.iso_end; ++i) iso += r.assignment.labels[i] == kAnomaly;
  const double iso_frac = static_cast<double>(iso) / static_cast<double>(L.iso_end - L.iso_begin);
  const double rec = min_recovery(r, b);
  const bool ok = seeds_clear && anom == b.spec.anomalous_size && iso_frac >= 0.90 && rec >= 0.90 && secs < 10.0;
  Outcome o{ok, "anomalous cluster " + std::to_string(anom) + "/" + std::to_string(b.spec.anomalous_size) +
                    " labelled -1, isolated " + std::to_string(iso) + "/" + std::to_string(L.iso_end - L.iso_begin) +
                    fmt(" (%.3f)", iso_frac) + ", min recovery " + fmt("%.4f", rec) + ", " + fmt("%.2f s", secs)};
  *keep = std::move(r);
  *bench = std::move(b);
  return o;
}

// Everything a generate -> cluster -> evaluate pipeline writes.
std::string pipeline_bytes(const Benchmark& b) {
  const SeedSample s = sample_seeds(b);
  const RunResult r = run(b.data, s.seeds);
  const EvalReport e = evaluate(r.assignment, b.data.truth());
  return format_dataset(b.data) + format_seeds(s.seeds) + format_spec(b.spec) + format_results(r.assignment) +
         format_model(r.assignment.models) + format_run_report(r.report) + format_eval_kv(e);
}

Outcome criterion_5() {
  std::size_t compared = 0;
  bool same = true;
  for (auto make : {std::function<Benchmark()>([] { return gen_1d(42); }),
                    std::function<Benchmark()>([] { return gen_2d(7); })}) {
    const std::string a = pipeline_bytes(make());
    const std::string b = pipeline_bytes(make());
    same = same && a == b;
    compared += a.size();
  }
  return {same, std::to_string(compared) + " bytes per run compared across two runs of each benchmark"};
}

Dataset transformed(const Dataset& d, double scale, double shift) {
  std::vector<double> v = d.values();
  for (double& x : v) x = x * scale + shift;
  return Dataset(d.dim(), std::move(v), d.has_truth() ? std::optional(d.truth()) : std::nullopt);
}

Outcome criterion_6() {
  struct Case {
    std::string name;
    Dataset data;
    SeedAssignment seeds;
  };
  std::vector<Case> cases;
  cases.push_back({"toy", fixtures::toy(), fixtures::toy_seeds()});
  {
    Benchmark b = gen_1d(42);
    SeedAssignment s = sample_seeds(b).seeds;
    cases.push_back({"1d", std::move(b.data), std::move(s)});
  }
  {
    Benchmark b = gen_2d(7);
    SeedAssignment s = sample_seeds(b).seeds;
    cases.push_back({"2d", std::move(b.data), std::move(s)});
  }
  std::size_t label_diffs = 0;
  double worst = 0.0;
  std::string where;
  for (const Case& c : cases) {
    const RunResult base = run(c.data, c.seeds);
    for (const auto& [scale, shift] : std::vector<std::pair<double, double>>{{1.0, 37.5}, {1e-3, 0.0}, {1e3, 0.0}}) {
      const RunResult t = run(transformed(c.data, scale, shift), c.seeds);
      for (std::size_t i = 0; i < base.assignment.labels.size(); ++i) {
        label_diffs += base.assignment.labels[i] != t.assignment.labels[i];
      }
      for (const auto& [id, m] : base.assignment.models) {
        const auto it = t.assignment.models.find(id);
        if (it == t.assignment.models.end()) {
          worst = INFINITY;
          continue;
        }
        const double expected = m.cutoff * scale;
        const double rel = expected == 0.0 ? std::fabs(it->second.cutoff) : std::fabs(it->second.cutoff - expected) / expected;
        if (rel > worst) {
          worst = rel;
          where = c.name + fmt(" scale %g", scale) + fmt(" shift %g", shift);
        }
      }
    }
  }
  const bool ok = label_diffs == 0 && worst <= 1e-9;
  return {ok, "3 fixtures x {shift 37.5, scale 1e-3, scale 1e3}: " + std::to_string(label_diffs) +
                  " label differences, worst cutoff error " + fmt("%.2e", worst) + (where.empty() ? "" : " (" + where + ")")};
}

// Points spaced ever wider away from a dense core, plus two heavily
// overlapping seeded groups: growth creeps outward and clusters compete for
// the same fringe.
Dataset fringe_fixture() {
  std::mt19937_64 gen(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Vector> rows;
  for (int i = 0; i < 300; ++i) rows.push_back({nd(gen), nd(gen)});
  for (int i = 0; i < 300; ++i) rows.push_back({1.5 + nd(gen), nd(gen)});
  double r = 3.0;
  for (int i = 0; i < 80; ++i) {
    const double a = 0.7 * i;
    rows.push_back({r * std::cos(a), r * std::sin(a)});
    r *= 1.03;
  }
  return Dataset::from_rows(rows);
}

Outcome criterion_7() {
  const Dataset d = fringe_fixture();
  SeedAssignment s;
  for (std::size_t i = 0; i < 300; i += 15) s.entries[i] = 0;
  for (std::size_t i = 300; i < 600; i += 15) s.entries[i] = 1;
  const RunResult r = run(d, s);
  const auto& rep = r.report;
  const bool ok_full = rep.passes <= kDefaultMaxIterations &&
                       (rep.converged != Convergence::no || rep.passes == kDefaultMaxIterations);

  // Two seeded groups that keep trading points must stop on the repeat.
  const RunResult osc = run(fixtures::oscillating(), fixtures::oscillating_seeds());
  const bool ok_osc = osc.report.passes <= kDefaultMaxIterations &&
                      (osc.report.converged != Convergence::no || osc.report.passes == kDefaultMaxIterations);

  // A low cap stops exactly at the cap on a run that needs more passes.
  const Benchmark b = gen_2d(7);
  const RunResult capped = run(b.data, sample_seeds(b).seeds, 3);
  const bool ok_cap = capped.report.passes == 3 && capped.report.converged == Convergence::no;

  return {ok_full && ok_osc && ok_cap, "fringe fixture: " + std::to_string(rep.passes) + " passes, converged " +
                                 to_string(rep.converged) + "; oscillating fixture: " +
                                 std::to_string(osc.report.passes) + " passes, converged " +
                                 to_string(osc.report.converged) + "; cap 3 on 2d: " + std::to_string(capped.report.passes) +
                                 " passes, converged " + to_string(capped.report.converged)};
}

Outcome criterion_8(const RunResult& r3, const Benchmark& b3, const RunResult& r4, const Benchmark& b4) {
  const RunResult r2 = run(fixtures::toy(), fixtures::toy_seeds());
  const Dataset toy = fixtures::toy();
  struct Item {
    const char* name;
    const Dataset* d;
    const RunResult* r;
  };
  const Item items[] = {{"toy", &toy, &r2}, {"1d", &b3.data, &r3}, {"2d", &b4.data, &r4}};
  bool ok = true;
  std::ostringstream detail;
  for (const Item& it : items) {
    std::size_t bad = 0;
    const bool converged = it.r->report.converged == Convergence::yes;
    const bool fixed = is_fixed_point(*it.d, it.r->assignment, &bad);
    // The property is only claimed for converged runs; a fixture that does
    // not converge cannot demonstrate it, so that counts as a failure too.
    ok = ok && converged && fixed;
    detail << it.name << ": converged " << to_string(it.r->report.converged) << ", " << bad << " violations; ";
  }
  std::string s = detail.str();
  s.resize(s.size() - 2);
  return {ok, s};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int n, const Outcome& o) {
    std::printf("criterion %d: %s - %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };
  auto guarded = [&](int n, const std::function<Outcome()>& f) {
    try {
      report(n, f());
    } catch (const std::exception& e) {
      report(n, {false, std::string("threw: ") + e.what()});
    }
  };

  RunResult r3, r4;
  Benchmark b3, b4;
  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, [&] { return criterion_3(&r3, &b3); });
  guarded(4, [&] { return criterion_4(&r4, &b4); });
  guarded(5, criterion_5);
  guarded(6, criterion_6);
  guarded(7, criterion_7);
  guarded(8, [&] { return criterion_8(r3, b3, r4, b4); });
  return all ? 0 : 1;
}
