#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seedgrow {

// Every recoverable failure in the library is reported with this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = std::vector<double>;

// Label values: -1 is the anomaly pool, non-negative values are cluster ids.
using Label = int;
inline constexpr Label kAnomaly = -1;

// Row-major table of finite feature vectors with dense ids 0..n-1.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dim, std::vector<double> values,
          std::optional<std::vector<Label>> truth = std::nullopt);

  static Dataset from_rows(const std::vector<Vector>& rows,
                           std::optional<std::vector<Label>> truth = std::nullopt);

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return size() == 0; }

  std::span<const double> point(std::size_t id) const {
    return {values_.data() + id * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

  bool has_truth() const { return truth_.has_value(); }
  const std::vector<Label>& truth() const;
  void set_truth(std::optional<std::vector<Label>> truth);

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::optional<std::vector<Label>> truth_;
};

}  // namespace seedgrow
