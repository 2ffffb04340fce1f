#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "seedgrow/engine.hpp"

using namespace seedgrow;
using fixtures::kA;
using fixtures::kB;

TEST_CASE("cluster order follows concentration") {
  {
    const Dataset d = Dataset::from_rows({{1}, {2}, {3}, {10}, {12}, {14}});
    const std::vector<Label> labels{1, 1, 1, 0, 0, 0};
    CHECK(order_clusters(d, labels) == std::vector<Label>{1, 0});
  }
  {
    const Dataset d = Dataset::from_rows({{0}, {1}, {5}, {6}});
    const std::vector<Label> labels{2, 2, 0, 0};
    CHECK(order_clusters(d, labels) == std::vector<Label>{0, 2});
  }
  {
    const Dataset d = Dataset::from_rows({{0}, {1}});
    const std::vector<Label> single{4, 4};
    CHECK(order_clusters(d, single) == std::vector<Label>{4});
    const std::vector<Label> none{kAnomaly, kAnomaly};
    CHECK_THROWS_WITH_AS(order_clusters(d, none), "no seeded clusters remain", Error);
  }
}

TEST_CASE("toy fixture follows the hand trace") {
  const Dataset d = fixtures::toy();
  const RunResult r = run(d, fixtures::toy_seeds());
  CHECK(r.report.converged == Convergence::yes);
  CHECK(r.report.passes == 2);
  CHECK(r.report.ejected_total == 0);
  CHECK(r.report.absorbed_total == 4);
  CHECK(r.assignment.labels == d.truth());
  CHECK(r.assignment.models.at(kA).cutoff == doctest::Approx(fixtures::toy_final_cutoff()).epsilon(1e-12));
  CHECK(r.assignment.models.at(kB).cutoff == doctest::Approx(fixtures::toy_final_cutoff()).epsilon(1e-9));
  CHECK(r.report.vanished.empty());

  // Members score under their own model; the lone point scores below one.
  CHECK(r.assignment.scores[5] == 10.0);
  CHECK(r.assignment.scores[20] < 1.0);

  SUBCASE("first pass only") {
    const RunResult one = run(d, fixtures::toy_seeds(), 1);
    CHECK(one.report.passes == 1);
    CHECK(one.report.converged == Convergence::no);
    CHECK(one.assignment.labels == d.truth());
  }
}

TEST_CASE("assigning new points to the toy clusters") {
  const RunResult r = run(fixtures::toy(), fixtures::toy_seeds());
  const auto& models = r.assignment.models;
  CHECK(assign_new(models, Vector{1.0}).first == kA);
  const auto [label, score] = assign_new(models, Vector{2.5});
  CHECK(label == kAnomaly);
  CHECK(score < 1.0);
  const auto at_median = assign_new(models, models.at(kB).median);
  CHECK(at_median.first == kB);
  CHECK(at_median.second == 10.0);
  CHECK_THROWS_AS(assign_new(models, Vector{1.0, 2.0}), Error);
  CHECK_THROWS_AS(assign_new({}, Vector{1.0}), Error);
}

TEST_CASE("fully seeded tight cluster is returned unchanged") {
  const Dataset d = Dataset::from_rows({{0.0}, {0.1}, {0.2}, {0.3}, {0.4}});
  SeedAssignment s;
  for (std::size_t i = 0; i < 5; ++i) s.entries[i] = 3;
  const RunResult r = run(d, s);
  CHECK(r.report.passes == 1);
  CHECK(r.report.converged == Convergence::yes);
  CHECK(r.assignment.labels == std::vector<Label>(5, 3));
}

TEST_CASE("a mislabelled seed is ejected") {
  std::vector<Vector> rows;
  for (int i = 0; i < 40; ++i) rows.push_back({i * 0.05});
  rows.push_back({30.0});
  const Dataset d = Dataset::from_rows(rows);
  SeedAssignment s;
  for (std::size_t i = 0; i < 40; i += 4) s.entries[i] = 0;
  s.entries[40] = 0;
  const RunResult r = run(d, s);
  CHECK(r.assignment.labels[40] == kAnomaly);
  CHECK(std::count(r.assignment.labels.begin(), r.assignment.labels.end(), 0) == 40);
}

TEST_CASE("labels stay within the seeded ids") {
  const Dataset d = fixtures::toy();
  SeedAssignment s;
  s.entries[3] = 7;
  s.entries[4] = 7;
  s.entries[5] = 7;
  const RunResult r = run(d, s);
  for (Label l : r.assignment.labels) CHECK((l == kAnomaly || l == 7));
}

TEST_CASE("a repeating label state stops the run") {
  const RunResult r = run(fixtures::oscillating(), fixtures::oscillating_seeds());
  CHECK(r.report.converged == Convergence::cycle);
  CHECK(r.report.passes < kDefaultMaxIterations);
  const RunResult capped = run(fixtures::oscillating(), fixtures::oscillating_seeds(), 1);
  CHECK(capped.report.passes == 1);
  CHECK(capped.report.converged == Convergence::no);
}

TEST_CASE("run input validation") {
  const Dataset d = fixtures::toy();
  CHECK_THROWS_WITH_AS(run(d, SeedAssignment{}), "no seeds", Error);
  SeedAssignment bad;
  bad.entries[99] = 0;
  CHECK_THROWS_AS(run(d, bad), Error);
  SeedAssignment negative;
  negative.entries[0] = -1;
  CHECK_THROWS_AS(run(d, negative), Error);
  CHECK_THROWS_AS(run(d, fixtures::toy_seeds(), 0), Error);
}

TEST_CASE("convergence names round-trip") {
  for (Convergence c : {Convergence::yes, Convergence::no, Convergence::cycle}) {
    CHECK(convergence_from_string(to_string(c)) == c);
  }
  CHECK_THROWS_AS(convergence_from_string("maybe"), Error);
}
