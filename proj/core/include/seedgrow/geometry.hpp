#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seedgrow/types.hpp"

namespace seedgrow {

// Per-coordinate median. Even counts use the mean of the two middle order
// statistics, so the result does not depend on point order.
Vector coordinate_median(const Dataset& data, std::span<const std::size_t> ids);
Vector coordinate_median(const std::vector<Vector>& points);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Mean (not sum) of squared distances to the coordinate median. Used to rank
// clusters from tightest to loosest.
double mean_squared_deviation(const Dataset& data, std::span<const std::size_t> ids);
double mean_squared_deviation(const std::vector<Vector>& points);

}  // namespace seedgrow
