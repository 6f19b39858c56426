#include "vwm/attack/whitebox.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "vwm/core/error.hpp"
#include "vwm/core/parallel.hpp"

namespace vwm {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// ∇_frame of the mean BCE between σ(β·corr_j) and wg_j.
std::vector<double> loss_gradient(std::span<const double> frame, const CodecKey& key, const Watermark& wg) {
  const FrameView view{key.frame_shape(), frame};
  const auto corr = carrier_correlations(view, key);
  const double gain = key.params().gain;
  const std::size_t size = frame.size();
  const double scale = gain / (static_cast<double>(size) * static_cast<double>(key.bits()));
  std::vector<double> grad(size, 0.0);
  for (std::size_t j = 0; j < key.bits(); ++j) {
    const double w = (sigmoid(gain * corr[j]) - static_cast<double>(wg[j])) * scale;
    auto c = key.carrier(j);
    for (std::size_t i = 0; i < size; ++i) grad[i] += w * c[i];
  }
  return grad;
}

void check_inputs(const Video& video, const CodecKey& key, const Watermark& wg) {
  if (video.frame_shape() != key.frame_shape()) throw DimensionError("video frame shape does not match the codec key");
  if (wg.size() != key.bits()) throw DimensionError("watermark length does not match the codec key");
}

bool flipped(const Video& v, const CodecKey& key, const Watermark& wg, AttackMode mode,
             const AggregationStrategy& strategy) {
  const auto verdict = detect(decode_video(v, key), wg, strategy).verdict;
  return mode == AttackMode::removal ? verdict == Verdict::unwatermarked : verdict == Verdict::watermarked;
}

}  // namespace

std::string_view attack_mode_name(AttackMode mode) { return mode == AttackMode::removal ? "removal" : "forgery"; }

AttackMode parse_attack_mode(std::string_view name) {
  if (name == "removal") return AttackMode::removal;
  if (name == "forgery") return AttackMode::forgery;
  throw ParameterError("attack mode must be removal or forgery, got '" + std::string(name) + "'");
}

double attack_loss(FrameView frame, const CodecKey& key, const Watermark& wg) {
  if (wg.size() != key.bits()) throw DimensionError("watermark length does not match the codec key");
  const auto corr = carrier_correlations(frame, key);
  const double gain = key.params().gain;
  double total = 0.0;
  for (std::size_t j = 0; j < key.bits(); ++j) {
    // −log σ(z) = softplus(−z), −log(1 − σ(z)) = softplus(z); stable for large |z|.
    const double z = gain * corr[j];
    const double t = wg[j] ? -z : z;
    total += t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  }
  return total / static_cast<double>(key.bits());
}

PgdResult pgd_bounded(const Video& video, const CodecKey& key, const Watermark& wg, const WhiteboxConfig& cfg) {
  check_inputs(video, key, wg);
  if (cfg.frame_mask) throw ParameterError("bounded PGD attacks every frame; frame_mask must be absent");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) throw ParameterError("epsilon must be > 0");
  if (cfg.steps == 0) throw ParameterError("steps must be >= 1");
  const double step = cfg.step_size.value_or(2.5 * cfg.epsilon / static_cast<double>(cfg.steps));
  if (!(step >= 0.0)) throw ParameterError("step size must be >= 0");
  // Removal ascends the BCE to the ground truth, forgery descends it.
  const double direction = cfg.mode == AttackMode::removal ? 1.0 : -1.0;

  const std::size_t size = video.frame_shape().size();
  std::vector<double> out(video.pixels().begin(), video.pixels().end());
  std::vector<double> frame_ba(video.frame_count());
  parallel_for(video.frame_count(), [&](std::size_t f) {
    auto original = video.frame_pixels(f);
    std::span<double> x(out.data() + f * size, size);
    std::vector<double> delta(size, 0.0);
    for (std::size_t it = 0; it < cfg.steps; ++it) {
      const auto grad = loss_gradient(x, key, wg);
      for (std::size_t i = 0; i < size; ++i) {
        const double lo = std::max(-cfg.epsilon, -original[i]);
        const double hi = std::min(cfg.epsilon, 1.0 - original[i]);
        delta[i] = std::clamp(delta[i] + direction * step * sign(grad[i]), lo, hi);
        x[i] = clamp_pixel(original[i] + delta[i]);
      }
    }
    const auto logits = decode_frame(FrameView{key.frame_shape(), x}, key);
    frame_ba[f] = bitwise_accuracy(round_logits(logits), wg.bits());
  });
  return {Video(video.shape(), std::move(out)), std::move(frame_ba)};
}

Video subset_arbitrary(const Video& video, const CodecKey& key, const Watermark& wg, const WhiteboxConfig& cfg) {
  check_inputs(video, key, wg);
  if (!cfg.frame_mask) throw ParameterError("subset attack needs a frame mask");
  const Bits& mask = *cfg.frame_mask;
  if (mask.size() != video.frame_count()) {
    throw DimensionError("frame mask has " + std::to_string(mask.size()) + " entries for " +
                         std::to_string(video.frame_count()) + " frames");
  }
  if (std::none_of(mask.begin(), mask.end(), [](auto b) { return b != 0; })) {
    throw ParameterError("frame mask selects no frame");
  }
  if (key.params().activation != Activation::identity) {
    throw ParameterError("subset attack needs the unbounded-logit (identity activation) codec");
  }
  const double step = cfg.step_size.value_or(0.05);
  if (!(step >= 0.0)) throw ParameterError("step size must be >= 0");
  // Removal lowers logits where wg = 1 and raises them where wg = 0.
  const double direction = cfg.mode == AttackMode::removal ? -1.0 : 1.0;

  std::vector<double> bit_signs(wg.size());
  for (std::size_t j = 0; j < wg.size(); ++j) bit_signs[j] = wg[j] ? 1.0 : -1.0;

  const std::size_t size = video.frame_shape().size();
  std::vector<double> out(video.pixels().begin(), video.pixels().end());
  parallel_for(video.frame_count(), [&](std::size_t f) {
    if (!mask[f]) return;
    std::span<double> x(out.data() + f * size, size);
    for (std::size_t it = 0; it < cfg.steps; ++it) {
      const auto grad = decoder_gradient(FrameView{key.frame_shape(), x}, key, bit_signs);
      for (std::size_t i = 0; i < size; ++i) x[i] = clamp_pixel(x[i] + direction * step * sign(grad[i]));
    }
  });
  return Video(video.shape(), std::move(out));
}

std::vector<double> epsilon_grid(double lo, double hi, double factor) {
  if (!(lo > 0.0) || !(hi >= lo) || !(factor > 1.0)) throw ParameterError("invalid epsilon grid");
  std::vector<double> grid;
  for (double e = lo; e <= hi * (1.0 + 1e-12); e *= factor) grid.push_back(e);
  return grid;
}

EpsilonSearchResult min_epsilon_search(const Video& video, const CodecKey& key, const Watermark& wg, AttackMode mode,
                                       std::size_t steps, const AggregationStrategy& strategy,
                                       const std::vector<double>& grid) {
  if (grid.empty()) throw ParameterError("epsilon grid is empty");
  EpsilonSearchResult result;
  auto succeeds = [&](double eps) {
    ++result.evaluations;
    WhiteboxConfig cfg;
    cfg.mode = mode;
    cfg.epsilon = eps;
    cfg.steps = steps;
    return flipped(pgd_bounded(video, key, wg, cfg).video, key, wg, mode, strategy);
  };
  if (!succeeds(grid.back())) {
    result.epsilon = grid.back();
    return result;
  }
  // Invariant: grid[hi] succeeds; every index below lo is known to fail.
  std::size_t lo = 0;
  std::size_t hi = grid.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (succeeds(grid[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  result.epsilon = grid[hi];
  result.found = true;
  return result;
}

Bits parse_frame_mask(std::string_view expr, std::size_t frames) {
  Bits mask(frames, 0);
  auto parse_index = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParameterError("invalid frame mask term '" + std::string(s) + "'");
    }
    if (v >= frames) throw ParameterError("frame " + std::to_string(v) + " out of range in mask");
    return v;
  };
  while (!expr.empty()) {
    const auto comma = expr.find(',');
    const auto term = expr.substr(0, comma);
    if (const auto dash = term.find('-'); dash != std::string_view::npos) {
      const std::size_t a = parse_index(term.substr(0, dash));
      const std::size_t b = parse_index(term.substr(dash + 1));
      if (a > b) throw ParameterError("descending range in frame mask");
      for (std::size_t i = a; i <= b; ++i) mask[i] = 1;
    } else {
      mask[parse_index(term)] = 1;
    }
    if (comma == std::string_view::npos) break;
    expr.remove_prefix(comma + 1);
  }
  return mask;
}

}  // namespace vwm
