#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vwm/attack/blackbox.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Gaussian noise on a coarse (H/f)×(W/f) grid per frame and channel,
// nearest-neighbour upsampled to full size.
std::vector<double> lowfreq_direction(const VideoShape& shape, std::size_t factor, std::mt19937_64& rng) {
  const auto& fs = shape.frame;
  const std::size_t gh = (fs.height + factor - 1) / factor, gw = (fs.width + factor - 1) / factor;
  std::normal_distribution<double> normal;
  std::vector<double> coarse(shape.frames * gh * gw * fs.channels);
  for (auto& g : coarse) g = normal(rng);
  std::vector<double> out(shape.frames * fs.size());
  std::size_t i = 0;
  for (std::size_t f = 0; f < shape.frames; ++f) {
    for (std::size_t y = 0; y < fs.height; ++y) {
      for (std::size_t x = 0; x < fs.width; ++x) {
        for (std::size_t c = 0; c < fs.channels; ++c) {
          out[i++] = coarse[((f * gh + y / factor) * gw + x / factor) * fs.channels + c];
        }
      }
    }
  }
  return out;
}

}  // namespace

AttackTrace triangle_attack(const Video& target, const LabelOracle& oracle, const Video& init, Verdict desired,
                            const TriangleConfig& cfg) {
  if (target.shape() != init.shape()) throw DimensionError("triangle attack: init and target shapes differ");
  if (cfg.max_queries == 0) throw ParameterError("max_queries must be >= 1");
  if (cfg.lowfreq_factor == 0) throw ParameterError("low-frequency factor must be >= 1");
  if (!(cfg.initial_angle > 0.0 && cfg.initial_angle < std::numbers::pi / 2)) {
    throw ParameterError("initial angle must lie in (0, pi/2)");
  }

  AttackTrace trace;
  const std::size_t start = oracle.queries();
  auto used = [&] { return oracle.queries() - start; };
  auto label = [&](const Video& v) {
    try {
      return oracle(v) == desired;
    } catch (const std::exception& e) {
      trace.queries_used = used();
      throw AttackAborted(trace, std::string("oracle failed during triangle attack: ") + e.what());
    }
  };

  if (!label(init)) throw InitializationError("triangle attack: initialization does not carry the desired label");
  const auto x = target.pixels();
  const std::size_t size = x.size();
  std::vector<double> current(init.pixels().begin(), init.pixels().end());
  double best = linf_distance(init, target);
  trace.history.push_back({1, best});

  auto blend = [&](double t, const std::vector<double>& toward) {
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) out[i] = clamp_pixel(x[i] + t * (toward[i] - x[i]));
    return out;
  };

  // Binary search along the segment from the target to the initialization.
  if (best > 0.0) {
    const std::vector<double> anchor = current;
    double lo = 0.0, hi = 1.0;
    for (std::size_t s = 0; s < cfg.line_search_steps && used() < cfg.max_queries; ++s) {
      const double mid = 0.5 * (lo + hi);
      Video candidate(target.shape(), blend(mid, anchor));
      if (label(candidate)) {
        hi = mid;
        current.assign(candidate.pixels().begin(), candidate.pixels().end());
        best = linf_distance(candidate, target);
      } else {
        lo = mid;
      }
      trace.history.push_back({used(), best});
    }
  }

  std::mt19937_64 rng = make_rng(cfg.seed, 0x7a1a);
  double angle = cfg.initial_angle;
  const double max_angle = 0.95 * std::numbers::pi / 2;
  std::vector<double> u(size);
  while (used() < cfg.max_queries && best > 0.0) {
    for (std::size_t i = 0; i < size; ++i) u[i] = current[i] - x[i];
    const double d = norm2(u);
    if (d == 0.0) break;
    for (auto& v : u) v /= d;
    auto v = lowfreq_direction(target.shape(), cfg.lowfreq_factor, rng);
    double dot = 0.0;
    for (std::size_t i = 0; i < size; ++i) dot += v[i] * u[i];
    for (std::size_t i = 0; i < size; ++i) v[i] -= dot * u[i];
    const double vn = norm2(v);
    if (vn == 0.0) continue;
    for (auto& e : v) e /= vn;

    // The apex of the triangle with legs d and d·cos(angle): always closer in ℓ2.
    bool accepted = false;
    for (double side : {1.0, -1.0}) {
      if (used() >= cfg.max_queries) break;
      const double cb = std::cos(angle), sb = std::sin(angle);
      std::vector<double> cand(size);
      for (std::size_t i = 0; i < size; ++i) cand[i] = clamp_pixel(x[i] + d * cb * (cb * u[i] + side * sb * v[i]));
      Video candidate(target.shape(), std::move(cand));
      const double dist = linf_distance(candidate, target);
      if (label(candidate) && dist <= best) {
        current.assign(candidate.pixels().begin(), candidate.pixels().end());
        best = dist;
        accepted = true;
      }
      trace.history.push_back({used(), best});
      if (accepted) break;
    }
    angle = accepted ? std::min(angle * cfg.grow, max_angle) : std::max(angle * cfg.shrink, 1e-4);
  }

  trace.best_video = Video(target.shape(), std::move(current));
  trace.queries_used = used();
  return trace;
}

}  // namespace vwm
