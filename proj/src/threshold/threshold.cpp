#include "vwm/threshold/threshold.hpp"

#include <cmath>
#include <string>

#include "vwm/core/error.hpp"

namespace vwm {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0,1), got " + std::to_string(eta));
}

}  // namespace

double binomial_tail(std::size_t n, double p, std::size_t m) {
  check_probability(p, "p");
  if (m > n + 1) throw ParameterError("binomial_tail: m must be at most n+1");
  if (m == 0) return 1.0;
  if (m == n + 1) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  using ld = long double;
  const ld lp = std::log(static_cast<ld>(p));
  const ld lq = std::log1p(-static_cast<ld>(p));
  const ld ratio = static_cast<ld>(p) / (1.0L - static_cast<ld>(p));
  const ld nn = static_cast<ld>(n);
  const ld mm = static_cast<ld>(m);

  // pmf(m) in log space, then pmf(k+1) = pmf(k)·(n−k)/(k+1)·p/q.
  ld term = std::exp(std::lgamma(nn + 1.0L) - std::lgamma(mm + 1.0L) - std::lgamma(nn - mm + 1.0L) + mm * lp +
                     (nn - mm) * lq);
  ld sum = 0.0L;
  ld carry = 0.0L;
  for (std::size_t k = m; k <= n; ++k) {
    const ld y = term - carry;
    const ld t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    term *= static_cast<ld>(n - k) / static_cast<ld>(k + 1) * ratio;
  }
  if (sum > 1.0L) sum = 1.0L;
  return static_cast<double>(sum);
}

std::size_t min_matches(std::size_t n, const Fraction& tau) {
  if (tau.den == 0) throw ParameterError("tau has zero denominator");
  const auto num = static_cast<unsigned __int128>(n) * tau.num;
  return static_cast<std::size_t>((num + tau.den - 1) / tau.den);
}

double fpr_of_tau(std::size_t n, const Fraction& tau) {
  if (n == 0) throw ParameterError("watermark length must be at least 1");
  if (2 * tau.num <= tau.den || tau.num > tau.den) {
    throw ParameterError("tau must lie in (0.5, 1], got " + tau.to_string());
  }
  return binomial_tail(n, 0.5, min_matches(n, tau));
}

Fraction select_tau(std::size_t n, double eta) {
  if (n == 0) throw ParameterError("watermark length must be at least 1");
  check_eta(eta);
  for (std::size_t m = 0; m <= n; ++m) {
    if (binomial_tail(n, 0.5, m) < eta) return {m, n};
  }
  throw InfeasibleError("no threshold reaches FPR < " + std::to_string(eta) + " with n=" + std::to_string(n) +
                        " bits (best is 2^-n)");
}

std::size_t select_k(std::size_t frames, double p, double eta) {
  check_probability(p, "P");
  check_eta(eta);
  for (std::size_t m = 0; m <= frames; ++m) {
    if (binomial_tail(frames, p, m) <= eta) return m;
  }
  throw InfeasibleError("no frame count k <= " + std::to_string(frames) + " keeps Pr(B >= k) <= " +
                        std::to_string(eta));
}

}  // namespace vwm
