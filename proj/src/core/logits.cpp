#include "vwm/core/logits.hpp"

#include <cmath>

#include "vwm/core/error.hpp"

namespace vwm {

LogitMatrix::LogitMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("logit matrix must be non-empty");
  if (values_.size() != rows_ * cols_) throw DimensionError("logit matrix buffer size mismatch");
  for (double v : values_) {
    if (std::isnan(v)) throw ParameterError("logit matrix contains NaN");
  }
}

LogitMatrix LogitMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionError("logit matrix must be non-empty");
  const std::size_t n = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionError("logit rows differ in length");
    values.insert(values.end(), r.begin(), r.end());
  }
  return LogitMatrix(rows.size(), n, std::move(values));
}

}  // namespace vwm
