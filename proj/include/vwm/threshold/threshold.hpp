#pragma once

#include <cstddef>

#include "vwm/core/fraction.hpp"

namespace vwm {

// Pr(B ≥ m) for B ~ Binomial(n, p). Terms are generated by the ratio
// recurrence in long double and summed with Kahan compensation.
// m = 0 gives 1, m = n + 1 gives 0.
double binomial_tail(std::size_t n, double p, std::size_t m);

// FPR(τ) = Pr(Binomial(n, 1/2) ≥ ⌈nτ⌉), the chance that an unwatermarked
// frame with independent fair bits reaches BA ≥ τ.
double fpr_of_tau(std::size_t n, const Fraction& tau);

// ⌈n·τ⌉ in exact integer arithmetic.
std::size_t min_matches(std::size_t n, const Fraction& tau);

// Smallest m with Pr(Binomial(n, 1/2) ≥ m) < η, returned as m/n.
Fraction select_tau(std::size_t n, double eta);

// Smallest m ∈ [0, F] with Pr(Binomial(F, P) ≥ m) ≤ η.
std::size_t select_k(std::size_t frames, double p, double eta = 1e-4);

}  // namespace vwm
