#pragma once

#include <cstdint>
#include <random>

namespace vwm {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based hash of (key, a, b). Used wherever a value must be a pure
// function of its coordinates rather than of a generator's call order.
constexpr std::uint64_t hash3(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(key) ^ a) ^ b);
}

// Independent generator streams derived from one user seed.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(hash3(seed, stream, 0x5eedULL));
}

}  // namespace vwm
