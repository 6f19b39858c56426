#pragma once

#include <atomic>
#include <functional>

#include "vwm/aggregate/aggregate.hpp"
#include "vwm/core/codec.hpp"
#include "vwm/core/video.hpp"

namespace vwm {

// Query-counting wrappers. The wrapped callable must be deterministic and
// safe to call concurrently if the oracle is shared.
class ScoreOracle {
 public:
  using Fn = std::function<double(const Video&)>;
  explicit ScoreOracle(Fn fn);
  double operator()(const Video& video) const;
  std::size_t queries() const { return queries_.load(); }

 private:
  Fn fn_;
  mutable std::atomic<std::size_t> queries_{0};
};

class LabelOracle {
 public:
  using Fn = std::function<Verdict(const Video&)>;
  explicit LabelOracle(Fn fn);
  Verdict operator()(const Video& video) const;
  std::size_t queries() const { return queries_.load(); }

 private:
  Fn fn_;
  mutable std::atomic<std::size_t> queries_{0};
};

// Score is DetectionResult::statistic: aggregated BA, or the number of
// detected frames for detection-level strategies.
ScoreOracle make_score_oracle(const CodecKey& key, const Watermark& wg, const AggregationStrategy& strategy);
LabelOracle make_label_oracle(const CodecKey& key, const Watermark& wg, const AggregationStrategy& strategy);

}  // namespace vwm
