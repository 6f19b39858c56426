#include "vwm/core/watermark.hpp"

#include <cmath>

#include "vwm/core/error.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

Watermark::Watermark(Bits bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw ParameterError("watermark length must be at least 1");
  for (auto b : bits_) {
    if (b > 1) throw ParameterError("watermark bits must be 0 or 1");
  }
}

Watermark Watermark::random(std::size_t n, std::uint64_t seed) {
  Bits bits(n);
  for (std::size_t j = 0; j < n; ++j) bits[j] = static_cast<std::uint8_t>(hash3(seed, 0xb175ULL, j) & 1U);
  return Watermark(std::move(bits));
}

Watermark Watermark::from_hex(std::string_view hex, std::size_t n) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  const std::size_t digits = (n + 3) / 4;
  if (n == 0 || hex.size() != digits) {
    throw ParameterError("hex watermark must have " + std::to_string(digits) + " digits for n=" + std::to_string(n));
  }
  Bits bits(digits * 4);
  for (std::size_t d = 0; d < digits; ++d) {
    const char ch = hex[d];
    int v = -1;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    if (v < 0) throw ParameterError(std::string("invalid hex digit '") + ch + "'");
    for (int b = 0; b < 4; ++b) bits[d * 4 + b] = static_cast<std::uint8_t>((v >> (3 - b)) & 1);
  }
  for (std::size_t j = n; j < bits.size(); ++j) {
    if (bits[j] != 0) throw ParameterError("hex watermark has bits set beyond n");
  }
  bits.resize(n);
  return Watermark(std::move(bits));
}

std::string Watermark::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t d = 0; d * 4 < bits_.size(); ++d) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t j = d * 4 + b;
      v = (v << 1) | (j < bits_.size() ? bits_[j] : 0);
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

Bits round_logits(std::span<const double> logits) {
  Bits out(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    if (std::isnan(logits[j])) throw ParameterError("round_logits: NaN logit");
    out[j] = logits[j] >= 0.5 ? 1 : 0;
  }
  return out;
}

std::size_t matching_bits(std::span<const std::uint8_t> w, std::span<const std::uint8_t> wg) {
  if (w.size() != wg.size()) {
    throw DimensionError("bitstring lengths differ: " + std::to_string(w.size()) + " vs " + std::to_string(wg.size()));
  }
  std::size_t m = 0;
  for (std::size_t j = 0; j < w.size(); ++j) m += (w[j] == wg[j]);
  return m;
}

double bitwise_accuracy(std::span<const std::uint8_t> w, std::span<const std::uint8_t> wg) {
  if (w.empty()) throw DimensionError("bitwise_accuracy: empty bitstrings");
  return static_cast<double>(matching_bits(w, wg)) / static_cast<double>(w.size());
}

}  // namespace vwm
