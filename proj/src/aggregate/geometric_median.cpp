#include "vwm/aggregate/geometric_median.hpp"

#include <algorithm>
#include <cmath>

#include "vwm/core/error.hpp"

namespace vwm {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

// A data point x_k is the geometric median iff the unit pulls of the other
// points sum to a vector no longer than the multiplicity of x_k.
bool data_point_is_optimal(std::span<const std::vector<double>> points, std::size_t k) {
  const std::size_t n = points[k].size();
  std::vector<double> pull(n, 0.0);
  double multiplicity = 0.0;
  for (const auto& p : points) {
    const double d = distance(p, points[k]);
    if (d == 0.0) {
      multiplicity += 1.0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) pull[j] += (p[j] - points[k][j]) / d;
  }
  double norm = 0.0;
  for (double v : pull) norm += v * v;
  return std::sqrt(norm) <= multiplicity;
}

}  // namespace

double geometric_median_objective(std::span<const std::vector<double>> points, std::span<const double> z) {
  double total = 0.0;
  for (const auto& p : points) total += distance(p, z);
  return total;
}

GeometricMedianResult geometric_median(std::span<const std::vector<double>> input,
                                       const GeometricMedianOptions& options) {
  // Ties between minimizers (e.g. two points) are broken by input order, so
  // solve on a canonical ordering to depend only on the multiset.
  std::vector<std::vector<double>> sorted(input.begin(), input.end());
  std::sort(sorted.begin(), sorted.end());
  const std::span<const std::vector<double>> points(sorted);
  if (points.empty()) throw DimensionError("geometric_median: no points");
  if (!(options.tol > 0.0)) throw ParameterError("geometric_median: tol must be > 0");
  const std::size_t n = points.front().size();
  for (const auto& p : points) {
    if (p.size() != n) throw DimensionError("geometric_median: points differ in dimension");
    for (double v : p) {
      if (!std::isfinite(v)) throw ParameterError("geometric_median: non-finite input");
    }
  }

  const bool all_same = std::all_of(points.begin(), points.end(), [&](const auto& p) { return p == points.front(); });
  if (all_same) return {points.front(), 0.0, 0};

  for (std::size_t k = 0; k < points.size(); ++k) {
    if (data_point_is_optimal(points, k)) {
      return {points[k], geometric_median_objective(points, points[k]), 0};
    }
  }

  std::vector<double> z(n, 0.0);
  for (const auto& p : points) {
    for (std::size_t j = 0; j < n; ++j) z[j] += p[j];
  }
  for (double& v : z) v /= static_cast<double>(points.size());
  double objective = geometric_median_objective(points, z);

  std::vector<double> next(n);
  std::size_t it = 0;
  while (it < options.max_iter) {
    ++it;
    std::fill(next.begin(), next.end(), 0.0);
    double weight_sum = 0.0;
    for (const auto& p : points) {
      const double w = 1.0 / (distance(p, z) + options.regularization);
      weight_sum += w;
      for (std::size_t j = 0; j < n; ++j) next[j] += w * p[j];
    }
    for (double& v : next) v /= weight_sum;
    const double next_objective = geometric_median_objective(points, next);
    if (next_objective > objective) break;
    const double decrease = objective - next_objective;
    z.swap(next);
    objective = next_objective;
    if (decrease < options.tol) break;
  }
  return {std::move(z), objective, it};
}

}  // namespace vwm
