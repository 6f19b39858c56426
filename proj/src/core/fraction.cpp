#include "vwm/core/fraction.hpp"

#include <charconv>

#include "vwm/core/error.hpp"

namespace vwm {

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParameterError("invalid fraction '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Fraction Fraction::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Fraction f{parse_u64(text.substr(0, slash), text), parse_u64(text.substr(slash + 1), text)};
    if (f.den == 0) throw ParameterError("fraction with zero denominator");
    return f;
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return {parse_u64(text, text), 1};
  const auto int_part = text.substr(0, dot);
  const auto frac_part = text.substr(dot + 1);
  if (frac_part.size() > 18) throw ParameterError("too many decimal digits in '" + std::string(text) + "'");
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  const std::uint64_t whole = int_part.empty() ? 0 : parse_u64(int_part, text);
  const std::uint64_t frac = frac_part.empty() ? 0 : parse_u64(frac_part, text);
  return {whole * den + frac, den};
}

}  // namespace vwm
