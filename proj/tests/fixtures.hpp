#pragma once

// Small hand-checked datasets shared by the unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <vector>

#include "seedgrow/engine.hpp"
#include "seedgrow/types.hpp"

namespace fixtures {

inline constexpr seedgrow::Label kA = 0;
inline constexpr seedgrow::Label kB = 1;

// {0.0..0.9} (ids 0-9), {5.0..5.9} (ids 10-19) and a lone point at 20 (id 20).
inline seedgrow::Dataset toy() {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(i / 10.0);
  for (int i = 0; i < 10; ++i) v.push_back(5.0 + i / 10.0);
  v.push_back(20.0);
  std::vector<seedgrow::Label> truth(21, seedgrow::kAnomaly);
  for (int i = 0; i < 10; ++i) truth[i] = kA;
  for (int i = 10; i < 20; ++i) truth[i] = kB;
  return seedgrow::Dataset(1, std::move(v), std::move(truth));
}

// 0.1..0.8 seeded as A, 5.1..5.8 seeded as B.
inline seedgrow::SeedAssignment toy_seeds() {
  seedgrow::SeedAssignment s;
  for (std::size_t i = 1; i <= 8; ++i) s.entries[i] = kA;
  for (std::size_t i = 11; i <= 18; ++i) s.entries[i] = kB;
  return s;
}

// Cutoff of the 10-point evenly spaced clusters after growth:
// 0.45 + 0.5 * (1 - 10^(-1/9)).
inline double toy_final_cutoff() { return 0.45 + 0.5 * (1.0 - std::pow(10.0, -1.0 / 9.0)); }

// Ten points whose two seeded groups trade fringe points back and forth, so
// the label state repeats instead of settling.
inline seedgrow::Dataset oscillating() {
  return seedgrow::Dataset(1, {0, 6.5, 2, 7.25, 9, 1.75, 0.25, 5.25, 1.75, 5.5});
}

inline seedgrow::SeedAssignment oscillating_seeds() {
  seedgrow::SeedAssignment s;
  s.entries = {{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  return s;
}

}  // namespace fixtures
