#pragma once

#include <cstdint>
#include <vector>

#include "vwm/attack/oracle.hpp"
#include "vwm/attack/trace.hpp"
#include "vwm/attack/whitebox.hpp"
#include "vwm/core/codec.hpp"

namespace vwm {

struct SquareConfig {
  AttackMode mode = AttackMode::removal;
  double epsilon = 0.05;
  std::size_t max_queries = 1000;
  std::uint64_t seed = 0;
  double initial_side_fraction = 0.1;                           // × √(0.8·H·W)
  std::vector<double> halving_points{0.10, 0.25, 0.50, 0.75};  // fractions of the budget
  bool per_frame = false;  // independent square per frame instead of one shared patch
};

// Score-based random search. Query 1 scores the input, query 2 the
// vertical-stripe initialization; every later query scores one square
// update. History records the best score after each query.
AttackTrace square_attack(const Video& video, const ScoreOracle& oracle, const SquareConfig& cfg);

// Square side in effect at a given 0-based query, for the configured schedule.
std::size_t square_side(const SquareConfig& cfg, std::size_t height, std::size_t width, std::size_t query);

struct TriangleConfig {
  std::size_t max_queries = 1000;
  std::uint64_t seed = 0;
  double initial_angle = 0.5235987755982988;  // π/6
  double grow = 1.1;
  double shrink = 0.9;
  std::size_t line_search_steps = 10;
  std::size_t lowfreq_factor = 4;  // random direction drawn on an H/f × W/f grid
};

// Label-only geometric search on the flattened video. Query 1 checks the
// initialization label; history records the accepted ℓ∞ distance to the
// target after each query.
AttackTrace triangle_attack(const Video& target, const LabelOracle& oracle, const Video& init, Verdict desired,
                            const TriangleConfig& cfg);

struct GaussianInit {
  Video video;
  double sigma = 0.0;
  std::size_t queries = 0;
};

struct GaussianInitConfig {
  double sigma0 = 0.02;
  double factor = 1.5;
  double sigma_cap = 2.0;
};

// Adds fresh N(0, σ²) noise at σ = σ₀·factor^k until the label flips to
// unwatermarked.
GaussianInit removal_init_gaussian(const Video& video, const LabelOracle& oracle, std::uint64_t seed,
                                   const GaussianInitConfig& cfg = {});

// Uniform noise around mid-gray, embedded with (key, wg).
Video forgery_init_unrelated(const VideoShape& shape, const CodecKey& key, const Watermark& wg, std::uint64_t seed);

}  // namespace vwm
