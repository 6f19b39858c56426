#include "vwm/attack/trace.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace vwm {

double trace_value_at(const AttackTrace& trace, std::size_t query_index) {
  if (trace.history.empty()) throw ParameterError("attack trace has no history");
  double value = trace.history.front().value;
  for (const auto& p : trace.history) {
    if (p.query_index > query_index) break;
    value = p.value;
  }
  return value;
}

std::string trace_csv(const AttackTrace& trace) {
  std::string out = "query_index,value\n";
  char buf[64];
  for (const auto& p : trace.history) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", p.query_index, p.value);
    out += buf;
  }
  return out;
}

std::string trace_summary_json(const AttackTrace& trace, Verdict final_verdict, double final_linf) {
  nlohmann::json j;
  j["final_verdict"] = verdict_name(final_verdict);
  j["queries"] = trace.queries_used;
  j["final_linf"] = final_linf;
  if (trace.history.empty()) {
    j["final_value"] = nullptr;
  } else {
    j["final_value"] = trace.history.back().value;
  }
  return j.dump(2) + "\n";
}

}  // namespace vwm
