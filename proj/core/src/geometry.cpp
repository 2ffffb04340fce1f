#include "seedgrow/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace seedgrow {

namespace {

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (n % 2 == 1) return upper;
  // nth_element leaves everything below mid no larger than v[mid].
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

Vector coordinate_median(const Dataset& data, std::span<const std::size_t> ids) {
  if (ids.empty()) throw Error("empty cluster");
  const std::size_t dim = data.dim();
  Vector median(dim);
  std::vector<double> column(ids.size());
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < ids.size(); ++i) column[i] = data.point(ids[i])[k];
    median[k] = median_inplace(column);
  }
  return median;
}

Vector coordinate_median(const std::vector<Vector>& points) {
  if (points.empty()) throw Error("empty cluster");
  const Dataset data = Dataset::from_rows(points);
  std::vector<std::size_t> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return coordinate_median(data, ids);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

double mean_squared_deviation(const Dataset& data, std::span<const std::size_t> ids) {
  const Vector median = coordinate_median(data, ids);
  double acc = 0.0;
  for (std::size_t id : ids) {
    const auto p = data.point(id);
    double sq = 0.0;
    for (std::size_t k = 0; k < median.size(); ++k) {
      const double diff = p[k] - median[k];
      sq += diff * diff;
    }
    acc += sq;
  }
  return acc / static_cast<double>(ids.size());
}

double mean_squared_deviation(const std::vector<Vector>& points) {
  if (points.empty()) throw Error("empty cluster");
  const Dataset data = Dataset::from_rows(points);
  std::vector<std::size_t> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return mean_squared_deviation(data, ids);
}

}  // namespace seedgrow
