#include <algorithm>
#include <cmath>
#include <random>

#include "vwm/attack/blackbox.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

namespace {

Video apply_delta(const Video& video, const std::vector<double>& delta) {
  const auto px = video.pixels();
  std::vector<double> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = clamp_pixel(px[i] + delta[i]);
  return Video(video.shape(), std::move(out));
}

}  // namespace

std::size_t square_side(const SquareConfig& cfg, std::size_t height, std::size_t width, std::size_t query) {
  const double base = std::sqrt(0.8 * static_cast<double>(height * width)) * cfg.initial_side_fraction;
  std::size_t side = static_cast<std::size_t>(std::ceil(base));
  const double frac = static_cast<double>(query) / static_cast<double>(cfg.max_queries);
  for (double point : cfg.halving_points) {
    if (frac >= point) side /= 2;
  }
  return std::clamp<std::size_t>(side, 1, std::min(height, width));
}

AttackTrace square_attack(const Video& video, const ScoreOracle& oracle, const SquareConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) throw ParameterError("epsilon must be > 0");
  if (cfg.max_queries == 0) throw ParameterError("max_queries must be >= 1");
  if (!(cfg.initial_side_fraction > 0.0)) throw ParameterError("initial square side must be positive");

  const auto& fs = video.frame_shape();
  const std::size_t F = video.frame_count(), H = fs.height, W = fs.width, C = fs.channels;
  const std::size_t frame_size = fs.size();
  // Removal lowers the score, forgery raises it.
  const double better = cfg.mode == AttackMode::removal ? -1.0 : 1.0;
  std::mt19937_64 rng = make_rng(cfg.seed, 0x5c0a7e);
  std::bernoulli_distribution coin(0.5);
  auto random_sign = [&] { return coin(rng) ? cfg.epsilon : -cfg.epsilon; };

  AttackTrace trace;
  const std::size_t start = oracle.queries();
  auto query = [&](const Video& candidate) {
    try {
      return oracle(candidate);
    } catch (const std::exception& e) {
      trace.queries_used = oracle.queries() - start;
      throw AttackAborted(trace, std::string("oracle failed during square attack: ") + e.what());
    }
  };

  // Vertical stripes: one sign per (column, channel), shared by every row
  // and, unless per_frame, by every frame.
  std::vector<double> delta(video.pixels().size());
  const std::size_t stripe_sets = cfg.per_frame ? F : 1;
  for (std::size_t s = 0; s < stripe_sets; ++s) {
    std::vector<double> stripes(W * C);
    for (auto& v : stripes) v = random_sign();
    const std::size_t f_end = cfg.per_frame ? s + 1 : F;
    for (std::size_t f = s; f < f_end; ++f) {
      for (std::size_t y = 0; y < H; ++y) {
        std::copy(stripes.begin(), stripes.end(), delta.begin() + f * frame_size + y * W * C);
      }
    }
  }
  Video best = apply_delta(video, delta);
  double best_score = query(best);
  trace.history.push_back({1, best_score});

  for (std::size_t q = 1; q < cfg.max_queries; ++q) {
    const std::size_t side = square_side(cfg, H, W, q);
    std::uniform_int_distribution<std::size_t> row(0, H - side), col(0, W - side);
    std::vector<double> candidate_delta = delta;
    auto paint = [&](std::size_t f, std::size_t r0, std::size_t c0, const std::vector<double>& values) {
      for (std::size_t y = r0; y < r0 + side; ++y) {
        for (std::size_t x = c0; x < c0 + side; ++x) {
          double* p = candidate_delta.data() + f * frame_size + (y * W + x) * C;
          std::copy(values.begin(), values.end(), p);
        }
      }
    };
    std::vector<double> values(C);
    if (cfg.per_frame) {
      for (std::size_t f = 0; f < F; ++f) {
        const std::size_t r0 = row(rng), c0 = col(rng);
        for (auto& v : values) v = random_sign();
        paint(f, r0, c0, values);
      }
    } else {
      const std::size_t r0 = row(rng), c0 = col(rng);
      for (auto& v : values) v = random_sign();
      for (std::size_t f = 0; f < F; ++f) paint(f, r0, c0, values);
    }
    Video candidate = apply_delta(video, candidate_delta);
    const double score = query(candidate);
    if (better * (score - best_score) > 0.0) {
      best_score = score;
      delta = std::move(candidate_delta);
      best = std::move(candidate);
    }
    trace.history.push_back({q + 1, best_score});
  }
  trace.best_video = std::move(best);
  trace.queries_used = oracle.queries() - start;
  return trace;
}

}  // namespace vwm
