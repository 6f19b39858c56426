#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vwm {

// F×n per-frame decoder outputs, row i belonging to frame i.
class LogitMatrix {
 public:
  LogitMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static LogitMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

}  // namespace vwm
