#include <array>
#include <cmath>
#include <numbers>

#include "vwm/core/error.hpp"
#include "vwm/perturb/perturb.hpp"

namespace vwm {

namespace {

// ITU-T T.81 Annex K.1 luminance table, natural (row-major) order.
constexpr std::array<int, 64> kLuminance = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

std::array<double, 64> scaled_table(int quality) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<double, 64> q{};
  for (int i = 0; i < 64; ++i) q[i] = std::clamp((kLuminance[i] * scale + 50) / 100, 1, 255);
  return q;
}

// cos((2x+1)uπ/16) scaled for the orthonormal 8-point DCT-II.
const std::array<double, 64>& dct_basis() {
  static const std::array<double, 64> basis = [] {
    std::array<double, 64> b{};
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) b[u * 8 + x] = cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
    return b;
  }();
  return basis;
}

void forward_dct(std::array<double, 64>& block) {
  const auto& b = dct_basis();
  std::array<double, 64> tmp{};
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += b[u * 8 + x] * block[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += b[v * 8 + y] * tmp[y * 8 + u];
      block[v * 8 + u] = s;
    }
}

void inverse_dct(std::array<double, 64>& block) {
  const auto& b = dct_basis();
  std::array<double, 64> tmp{};
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += b[u * 8 + x] * block[v * 8 + u];
      tmp[v * 8 + x] = s;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += b[v * 8 + y] * tmp[v * 8 + x];
      block[y * 8 + x] = s;
    }
}

}  // namespace

// Baseline-JPEG pixel path on each channel independently: 8-bit level
// shift, 8×8 DCT, quantize/dequantize with the quality-scaled table,
// inverse DCT, round to 8-bit. Partial edge blocks are padded by edge
// replication. Entropy coding is lossless and therefore skipped.
Frame jpeg(const Frame& frame, int quality) {
  if (quality < 1 || quality > 100) throw ParameterError("JPEG quality must lie in [1,100]");
  const auto table = scaled_table(quality);
  const auto& s = frame.shape();
  std::vector<double> out(frame.pixels().begin(), frame.pixels().end());
  std::array<double, 64> block{};
  for (std::size_t c = 0; c < s.channels; ++c) {
    for (std::size_t by = 0; by < s.height; by += 8) {
      for (std::size_t bx = 0; bx < s.width; bx += 8) {
        for (std::size_t y = 0; y < 8; ++y) {
          const std::size_t sy = std::min(by + y, s.height - 1);
          for (std::size_t x = 0; x < 8; ++x) {
            const std::size_t sx = std::min(bx + x, s.width - 1);
            block[y * 8 + x] = std::round(frame.at(sy, sx, c) * 255.0) - 128.0;
          }
        }
        forward_dct(block);
        for (int i = 0; i < 64; ++i) block[i] = std::round(block[i] / table[i]) * table[i];
        inverse_dct(block);
        for (std::size_t y = 0; y < 8 && by + y < s.height; ++y) {
          for (std::size_t x = 0; x < 8 && bx + x < s.width; ++x) {
            const double v = std::clamp(std::round(block[y * 8 + x] + 128.0), 0.0, 255.0);
            out[((by + y) * s.width + bx + x) * s.channels + c] = v / 255.0;
          }
        }
      }
    }
  }
  return Frame(s, std::move(out));
}

}  // namespace vwm
