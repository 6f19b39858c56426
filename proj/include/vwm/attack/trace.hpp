#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwm/aggregate/aggregate.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/video.hpp"

namespace vwm {

struct TracePoint {
  std::size_t query_index = 0;  // 1-based oracle call that produced the value
  double value = 0.0;           // best score (square) or accepted ℓ∞ (triangle)
};

struct AttackTrace {
  std::optional<Video> best_video;
  std::vector<TracePoint> history;
  std::size_t queries_used = 0;
};

// Thrown when the oracle fails mid-attack; carries the trace so far.
class AttackAborted : public Error {
 public:
  AttackAborted(AttackTrace trace, const std::string& what) : Error(what), trace_(std::move(trace)) {}
  const AttackTrace& trace() const { return trace_; }

 private:
  AttackTrace trace_;
};

// Value in history at or before the given query index (the initial value if
// none precede it). Throws on an empty history.
double trace_value_at(const AttackTrace& trace, std::size_t query_index);

std::string trace_csv(const AttackTrace& trace);
// {"final_verdict", "queries", "final_linf", "final_value"}.
std::string trace_summary_json(const AttackTrace& trace, Verdict final_verdict, double final_linf);

}  // namespace vwm
