#include "seedgrow/types.hpp"

#include <cmath>
#include <string>

namespace seedgrow {

Dataset::Dataset(std::size_t dim, std::vector<double> values,
                 std::optional<std::vector<Label>> truth)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw Error("dataset dimension must be at least 1");
  if (values_.size() % dim_ != 0) throw Error("dataset values are not a whole number of rows");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error("non-finite feature value in row " + std::to_string(i / dim_));
    }
  }
  set_truth(std::move(truth));
}

Dataset Dataset::from_rows(const std::vector<Vector>& rows,
                           std::optional<std::vector<Label>> truth) {
  if (rows.empty()) throw Error("empty dataset");
  const std::size_t dim = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw Error("dimension mismatch between rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Dataset(dim, std::move(values), std::move(truth));
}

const std::vector<Label>& Dataset::truth() const {
  if (!truth_) throw Error("dataset has no truth labels");
  return *truth_;
}

void Dataset::set_truth(std::optional<std::vector<Label>> truth) {
  if (truth) {
    if (truth->size() != size()) throw Error("truth labels length differs from dataset size");
    for (Label l : *truth) {
      if (l < kAnomaly) throw Error("label values must be >= -1");
    }
  }
  truth_ = std::move(truth);
}

}  // namespace seedgrow
