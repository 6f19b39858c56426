#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "vwm/aggregate/geometric_median.hpp"
#include "vwm/core/fraction.hpp"
#include "vwm/core/logits.hpp"
#include "vwm/core/watermark.hpp"

namespace vwm {

enum class StrategyKind {
  logit_mean,
  logit_median,
  bit_median,
  ba_mean,
  ba_median,
  detection_median,
  detection_threshold,
};

inline constexpr StrategyKind kAllStrategies[] = {
    StrategyKind::logit_mean, StrategyKind::logit_median,     StrategyKind::bit_median,
    StrategyKind::ba_mean,    StrategyKind::ba_median,        StrategyKind::detection_median,
    StrategyKind::detection_threshold,
};

// CLI/config tokens: "logit-mean", "detection-threshold", ...
std::string_view strategy_name(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

// True for the two strategies whose statistic counts detected frames.
bool is_detection_level(StrategyKind kind);

struct AggregationStrategy {
  StrategyKind kind = StrategyKind::ba_mean;
  Fraction tau{27, 32};
  std::optional<std::size_t> k;  // detection_threshold only

  // τ ∈ (0.5, 1]; k present iff detection_threshold, and k ≥ 1.
  void validate() const;
};

enum class Verdict { unwatermarked, watermarked };

std::string_view verdict_name(Verdict v);

struct DetectionResult {
  Verdict verdict = Verdict::unwatermarked;
  // Aggregated BA for logit-, bit- and BA-level strategies; number of
  // detected frames for detection-level strategies.
  double statistic = 0.0;
  std::optional<Bits> frame_decisions;
  StrategyKind strategy = StrategyKind::ba_mean;
};

std::vector<double> logit_mean(const LogitMatrix& logits);
std::vector<double> logit_median(const LogitMatrix& logits, const GeometricMedianOptions& options = {});
Bits bit_median(const LogitMatrix& logits);
double ba_mean(const LogitMatrix& logits, const Watermark& wg);
double ba_median(const LogitMatrix& logits, const Watermark& wg);

// d_i = 1 iff BA(round(row i), wg) ≥ τ.
Bits frame_decisions(const LogitMatrix& logits, const Watermark& wg, const Fraction& tau);

DetectionResult detect(const LogitMatrix& logits, const Watermark& wg, const AggregationStrategy& strategy);

}  // namespace vwm
