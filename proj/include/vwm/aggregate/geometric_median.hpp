#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vwm {

struct GeometricMedianOptions {
  double tol = 1e-9;  // stop once one iteration lowers the objective by less than this
  std::size_t max_iter = 1000;
  double regularization = 1e-12;  // added to every distance in the Weiszfeld weights
};

struct GeometricMedianResult {
  std::vector<double> point;
  double objective = 0.0;  // Σ_i ||point − y_i||₂
  std::size_t iterations = 0;
};

// Sum of Euclidean distances from z to every point.
double geometric_median_objective(std::span<const std::vector<double>> points, std::span<const double> z);

// Minimizer of Σ_i ||z − y_i||₂. Data points are first tested for exact
// optimality (the subgradient condition); otherwise Weiszfeld iteration runs
// from the arithmetic mean, so the result never scores worse than the mean.
GeometricMedianResult geometric_median(std::span<const std::vector<double>> points,
                                       const GeometricMedianOptions& options = {});

}  // namespace vwm
