#pragma once

#include <limits>
#include <span>

#include "vwm/core/video.hpp"

namespace vwm {

inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();

// 10·log10(1/MSE) over all pixels, peak 1.0; kPsnrInfinity when identical.
double psnr(const Video& a, const Video& b);

// Single-scale SSIM with an 11×11 Gaussian window (σ = 1.5) over the valid
// region, C1 = 0.01², C2 = 0.03², averaged over frames and channels.
// Frames must be at least 11×11.
double ssim(const Video& a, const Video& b);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Welch's unequal-variance t-test, two-sided.
TTestResult two_tailed_t_test(std::span<const double> xs, std::span<const double> ys);

}  // namespace vwm
