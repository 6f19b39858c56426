#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vwm {

// Non-negative rational num/den, kept unreduced so 27/32 prints as such.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

  // Accepts "a/b" or a plain decimal ("0.84375", "1"); decimals are
  // converted exactly to digits/10^k.
  static Fraction parse(std::string_view text);

  bool operator==(const Fraction&) const = default;
};

// a/b ≥ num/den, exact.
inline bool ratio_at_least(std::uint64_t a, std::uint64_t b, const Fraction& f) {
  return static_cast<unsigned __int128>(a) * f.den >= static_cast<unsigned __int128>(f.num) * b;
}

}  // namespace vwm
