#pragma once

#include <optional>
#include <vector>

#include "vwm/aggregate/aggregate.hpp"
#include "vwm/core/codec.hpp"
#include "vwm/core/video.hpp"
#include "vwm/core/watermark.hpp"

namespace vwm {

enum class AttackMode { removal, forgery };

std::string_view attack_mode_name(AttackMode mode);
AttackMode parse_attack_mode(std::string_view name);

struct WhiteboxConfig {
  AttackMode mode = AttackMode::removal;
  double epsilon = 0.05;                 // ℓ∞ bound, bounded scenario only
  std::size_t steps = 200;
  std::optional<double> step_size;       // default 2.5·ε/steps (bounded), 0.05 (subset)
  std::optional<Bits> frame_mask;        // 1 = attackable, subset scenario only
};

struct PgdResult {
  Video video;
  std::vector<double> frame_ba;  // BA(round(decode(frame_i)), wg) after the attack
};

// Mean binary cross-entropy between σ(β·corr_j) and the target bits: the
// loss that bounded PGD ascends for removal and descends for forgery.
double attack_loss(FrameView frame, const CodecKey& key, const Watermark& wg);

// Sign-gradient PGD per frame under ||δ||∞ ≤ ε, pixels kept in [0,1].
PgdResult pgd_bounded(const Video& video, const CodecKey& key, const Watermark& wg, const WhiteboxConfig& cfg);

// Unbounded sign-gradient descent on Σ_j sign(wg_j − 0.5)·logit_j over the
// masked frames (ascent for forgery); unmasked frames are copied verbatim.
// Requires the identity-activation codec.
Video subset_arbitrary(const Video& video, const CodecKey& key, const Watermark& wg, const WhiteboxConfig& cfg);

// ε_k = lo·factor^k while ≤ hi.
std::vector<double> epsilon_grid(double lo = 1e-3, double hi = 0.25, double factor = 1.25);

struct EpsilonSearchResult {
  double epsilon = 0.0;
  bool found = false;
  std::size_t evaluations = 0;  // pgd_bounded runs
};

// Smallest grid ε whose pgd_bounded output flips the verdict in the mode's
// direction, located by bisection over grid indices. When even the largest
// ε fails, returns the grid maximum with found = false.
EpsilonSearchResult min_epsilon_search(const Video& video, const CodecKey& key, const Watermark& wg, AttackMode mode,
                                       std::size_t steps, const AggregationStrategy& strategy,
                                       const std::vector<double>& grid = epsilon_grid());

// Parses "0-2,7" into a mask of length F.
Bits parse_frame_mask(std::string_view expr, std::size_t frames);

}  // namespace vwm
