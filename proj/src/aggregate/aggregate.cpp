#include "vwm/aggregate/aggregate.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vwm/core/error.hpp"

namespace vwm {

namespace {

constexpr std::pair<StrategyKind, std::string_view> kNames[] = {
    {StrategyKind::logit_mean, "logit-mean"},
    {StrategyKind::logit_median, "logit-median"},
    {StrategyKind::bit_median, "bit-median"},
    {StrategyKind::ba_mean, "ba-mean"},
    {StrategyKind::ba_median, "ba-median"},
    {StrategyKind::detection_median, "detection-median"},
    {StrategyKind::detection_threshold, "detection-threshold"},
};

void check_width(const LogitMatrix& logits, const Watermark& wg) {
  if (logits.cols() != wg.size()) {
    throw DimensionError("logit rows have " + std::to_string(logits.cols()) + " entries, watermark has " +
                         std::to_string(wg.size()));
  }
}

std::vector<std::size_t> per_frame_matches(const LogitMatrix& logits, const Watermark& wg) {
  check_width(logits, wg);
  std::vector<std::size_t> m(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) m[i] = matching_bits(round_logits(logits.row(i)), wg.bits());
  return m;
}

// Sum of the two middle order statistics (twice the median for odd counts).
std::size_t twice_median(std::vector<std::size_t> v) {
  const std::size_t F = v.size();
  std::sort(v.begin(), v.end());
  return F % 2 == 1 ? 2 * v[F / 2] : v[F / 2 - 1] + v[F / 2];
}

DetectionResult bits_level(const Bits& aggregated, const Watermark& wg, const AggregationStrategy& s) {
  const std::size_t m = matching_bits(aggregated, wg.bits());
  DetectionResult r;
  r.strategy = s.kind;
  r.statistic = static_cast<double>(m) / static_cast<double>(wg.size());
  r.verdict = ratio_at_least(m, wg.size(), s.tau) ? Verdict::watermarked : Verdict::unwatermarked;
  return r;
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
  for (auto [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  for (auto [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ParameterError("unknown aggregation strategy '" + std::string(name) + "'");
}

bool is_detection_level(StrategyKind kind) {
  return kind == StrategyKind::detection_median || kind == StrategyKind::detection_threshold;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::watermarked ? "watermarked" : "unwatermarked"; }

void AggregationStrategy::validate() const {
  if (tau.den == 0 || 2 * tau.num <= tau.den || tau.num > tau.den) {
    throw ParameterError("tau must lie in (0.5, 1], got " + tau.to_string());
  }
  if (kind == StrategyKind::detection_threshold) {
    if (!k || *k == 0) throw ParameterError("detection-threshold needs a frame count k >= 1");
  } else if (k) {
    throw ParameterError("k is only meaningful for detection-threshold");
  }
}

std::vector<double> logit_mean(const LogitMatrix& logits) {
  // Columns are summed in sorted order so the result ignores frame order.
  std::vector<double> mean(logits.cols(), 0.0);
  std::vector<double> column(logits.rows());
  for (std::size_t j = 0; j < logits.cols(); ++j) {
    for (std::size_t i = 0; i < logits.rows(); ++i) column[i] = logits(i, j);
    std::sort(column.begin(), column.end());
    double s = 0.0;
    for (double v : column) s += v;
    mean[j] = s / static_cast<double>(logits.rows());
  }
  return mean;
}

std::vector<double> logit_median(const LogitMatrix& logits, const GeometricMedianOptions& options) {
  std::vector<std::vector<double>> rows;
  rows.reserve(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) rows.emplace_back(logits.row(i).begin(), logits.row(i).end());
  return geometric_median(rows, options).point;
}

Bits bit_median(const LogitMatrix& logits) {
  std::vector<std::size_t> ones(logits.cols(), 0);
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const Bits w = round_logits(logits.row(i));
    for (std::size_t j = 0; j < w.size(); ++j) ones[j] += w[j];
  }
  Bits out(logits.cols());
  // Σ w_i[j] ≥ F/2, ties vote 1.
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = 2 * ones[j] >= logits.rows() ? 1 : 0;
  return out;
}

double ba_mean(const LogitMatrix& logits, const Watermark& wg) {
  const auto m = per_frame_matches(logits, wg);
  const std::size_t total = std::accumulate(m.begin(), m.end(), std::size_t{0});
  return static_cast<double>(total) / static_cast<double>(logits.rows() * wg.size());
}

double ba_median(const LogitMatrix& logits, const Watermark& wg) {
  const auto m = per_frame_matches(logits, wg);
  return static_cast<double>(twice_median(m)) / static_cast<double>(2 * wg.size());
}

Bits frame_decisions(const LogitMatrix& logits, const Watermark& wg, const Fraction& tau) {
  const auto m = per_frame_matches(logits, wg);
  Bits d(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) d[i] = ratio_at_least(m[i], wg.size(), tau) ? 1 : 0;
  return d;
}

DetectionResult detect(const LogitMatrix& logits, const Watermark& wg, const AggregationStrategy& strategy) {
  strategy.validate();
  check_width(logits, wg);
  const std::size_t F = logits.rows();
  const std::size_t n = wg.size();

  switch (strategy.kind) {
    case StrategyKind::logit_mean:
      return bits_level(round_logits(logit_mean(logits)), wg, strategy);
    case StrategyKind::logit_median:
      return bits_level(round_logits(logit_median(logits)), wg, strategy);
    case StrategyKind::bit_median:
      return bits_level(bit_median(logits), wg, strategy);
    case StrategyKind::ba_mean: {
      const auto m = per_frame_matches(logits, wg);
      const std::size_t total = std::accumulate(m.begin(), m.end(), std::size_t{0});
      DetectionResult r;
      r.strategy = strategy.kind;
      r.statistic = static_cast<double>(total) / static_cast<double>(F * n);
      r.verdict = ratio_at_least(total, F * n, strategy.tau) ? Verdict::watermarked : Verdict::unwatermarked;
      return r;
    }
    case StrategyKind::ba_median: {
      const std::size_t twice = twice_median(per_frame_matches(logits, wg));
      DetectionResult r;
      r.strategy = strategy.kind;
      r.statistic = static_cast<double>(twice) / static_cast<double>(2 * n);
      r.verdict = ratio_at_least(twice, 2 * n, strategy.tau) ? Verdict::watermarked : Verdict::unwatermarked;
      return r;
    }
    case StrategyKind::detection_median:
    case StrategyKind::detection_threshold: {
      Bits d = frame_decisions(logits, wg, strategy.tau);
      const std::size_t detected = std::accumulate(d.begin(), d.end(), std::size_t{0});
      bool positive = false;
      if (strategy.kind == StrategyKind::detection_median) {
        positive = 2 * detected >= F;
      } else {
        if (*strategy.k > F) {
          throw ParameterError("k=" + std::to_string(*strategy.k) + " exceeds the frame count " + std::to_string(F));
        }
        positive = detected >= *strategy.k;
      }
      DetectionResult r;
      r.strategy = strategy.kind;
      r.statistic = static_cast<double>(detected);
      r.verdict = positive ? Verdict::watermarked : Verdict::unwatermarked;
      r.frame_decisions = std::move(d);
      return r;
    }
  }
  throw ParameterError("unhandled strategy");
}

}  // namespace vwm
