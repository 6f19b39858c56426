#include "vwm/bench/metrics.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "vwm/core/error.hpp"
#include "vwm/perturb/perturb.hpp"

namespace vwm {

namespace {

void require_same_shape(const Video& a, const Video& b) {
  if (a.shape() != b.shape()) throw DimensionError("metric inputs have different shapes");
}

// Valid-region separable filtering of one H×W plane.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t h, std::size_t w,
                                 const std::vector<double>& taps) {
  const std::size_t k = taps.size();
  const std::size_t ow = w - k + 1, oh = h - k + 1;
  std::vector<double> tmp(h * ow, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += taps[t] * plane[y * w + x + t];
      tmp[y * ow + x] = s;
    }
  }
  std::vector<double> out(oh * ow, 0.0);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += taps[t] * tmp[(y + t) * ow + x];
      out[y * ow + x] = s;
    }
  }
  return out;
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double m) {
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

double psnr(const Video& a, const Video& b) {
  require_same_shape(a, b);
  const auto pa = a.pixels(), pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) sum += (pa[i] - pb[i]) * (pa[i] - pb[i]);
  if (sum == 0.0) return kPsnrInfinity;
  return -10.0 * std::log10(sum / static_cast<double>(pa.size()));
}

double ssim(const Video& a, const Video& b) {
  require_same_shape(a, b);
  constexpr std::size_t kWindow = 11;
  constexpr double C1 = 0.01 * 0.01, C2 = 0.03 * 0.03;
  const auto& fs = a.frame_shape();
  if (fs.height < kWindow || fs.width < kWindow) {
    throw DimensionError("SSIM needs frames of at least 11x11");
  }
  const auto taps = gaussian_kernel(1.5);
  const std::size_t plane = fs.height * fs.width;
  double total = 0.0;
  std::size_t planes = 0;
  std::vector<double> x(plane), y(plane), xx(plane), yy(plane), xy(plane);
  for (std::size_t f = 0; f < a.frame_count(); ++f) {
    const auto fa = a.frame_pixels(f), fb = b.frame_pixels(f);
    for (std::size_t c = 0; c < fs.channels; ++c) {
      for (std::size_t i = 0; i < plane; ++i) {
        x[i] = fa[i * fs.channels + c];
        y[i] = fb[i * fs.channels + c];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
      }
      const auto mx = filter_valid(x, fs.height, fs.width, taps);
      const auto my = filter_valid(y, fs.height, fs.width, taps);
      const auto mxx = filter_valid(xx, fs.height, fs.width, taps);
      const auto myy = filter_valid(yy, fs.height, fs.width, taps);
      const auto mxy = filter_valid(xy, fs.height, fs.width, taps);
      double sum = 0.0;
      for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = mxx[i] - mx[i] * mx[i];
        const double vy = myy[i] - my[i] * my[i];
        const double cxy = mxy[i] - mx[i] * my[i];
        sum += ((2.0 * mx[i] * my[i] + C1) * (2.0 * cxy + C2)) /
               ((mx[i] * mx[i] + my[i] * my[i] + C1) * (vx + vy + C2));
      }
      total += sum / static_cast<double>(mx.size());
      ++planes;
    }
  }
  return total / static_cast<double>(planes);
}

TTestResult two_tailed_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2 || ys.size() < 2) throw ParameterError("t-test needs at least two samples per group");
  const double nx = static_cast<double>(xs.size()), ny = static_cast<double>(ys.size());
  const double mx = mean(xs), my = mean(ys);
  const double sx = sample_variance(xs, mx) / nx, sy = sample_variance(ys, my) / ny;
  if (sx + sy == 0.0) throw ParameterError("t-test undefined: both samples have zero variance");
  TTestResult r;
  r.t = (mx - my) / std::sqrt(sx + sy);
  r.df = (sx + sy) * (sx + sy) / (sx * sx / (nx - 1.0) + sy * sy / (ny - 1.0));
  const boost::math::students_t dist(r.df);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

}  // namespace vwm
