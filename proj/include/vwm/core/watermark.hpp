#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vwm {

using Bits = std::vector<std::uint8_t>;

// An n-bit ground-truth watermark, n ≥ 1, each entry 0 or 1.
class Watermark {
 public:
  explicit Watermark(Bits bits);

  static Watermark random(std::size_t n, std::uint64_t seed);
  // Hex digits, most significant bit first. Exactly ceil(n/4) digits are
  // required; unused low bits of the last digit must be zero.
  static Watermark from_hex(std::string_view hex, std::size_t n);

  std::size_t size() const { return bits_.size(); }
  const Bits& bits() const { return bits_; }
  std::uint8_t operator[](std::size_t j) const { return bits_[j]; }
  std::string to_hex() const;

  bool operator==(const Watermark&) const = default;

 private:
  Bits bits_;
};

// bit_j = 1 iff y_j ≥ 0.5.
Bits round_logits(std::span<const double> logits);

// Fraction of matching positions.
double bitwise_accuracy(std::span<const std::uint8_t> w, std::span<const std::uint8_t> wg);
std::size_t matching_bits(std::span<const std::uint8_t> w, std::span<const std::uint8_t> wg);

}  // namespace vwm
