#include "vwm/attack/oracle.hpp"

#include <memory>

#include "vwm/core/error.hpp"

namespace vwm {

ScoreOracle::ScoreOracle(Fn fn) : fn_(std::move(fn)) {
  if (!fn_) throw ParameterError("score oracle needs a callable");
}

double ScoreOracle::operator()(const Video& video) const {
  queries_.fetch_add(1);
  return fn_(video);
}

LabelOracle::LabelOracle(Fn fn) : fn_(std::move(fn)) {
  if (!fn_) throw ParameterError("label oracle needs a callable");
}

Verdict LabelOracle::operator()(const Video& video) const {
  queries_.fetch_add(1);
  return fn_(video);
}

ScoreOracle make_score_oracle(const CodecKey& key, const Watermark& wg, const AggregationStrategy& strategy) {
  strategy.validate();
  auto shared = std::make_shared<const CodecKey>(key);
  return ScoreOracle([shared, wg, strategy](const Video& v) {
    return detect(decode_video(v, *shared), wg, strategy).statistic;
  });
}

LabelOracle make_label_oracle(const CodecKey& key, const Watermark& wg, const AggregationStrategy& strategy) {
  strategy.validate();
  auto shared = std::make_shared<const CodecKey>(key);
  return LabelOracle([shared, wg, strategy](const Video& v) {
    return detect(decode_video(v, *shared), wg, strategy).verdict;
  });
}

}  // namespace vwm
