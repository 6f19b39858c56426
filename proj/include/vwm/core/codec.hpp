#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vwm/core/logits.hpp"
#include "vwm/core/video.hpp"
#include "vwm/core/watermark.hpp"

namespace vwm {

enum class Activation {
  sigmoid,   // logits in (0, 1)
  identity,  // 0.5 + gain·correlation, unbounded
};

enum class CarrierLayout {
  highpass,  // pixels (2p, 2p+1) of a row carry opposite signs
  white,     // every pixel drawn independently
};

struct CodecParams {
  std::uint64_t seed = 0;
  std::size_t bits = 32;
  double strength = 0.02;  // per-pixel RMS of the embedded pattern
  double gain = 50.0;
  Activation activation = Activation::sigmoid;
  CarrierLayout layout = CarrierLayout::highpass;
};

// Key material of the additive spread-spectrum reference codec: n ±1
// carrier patterns, each a pure function of (seed, bit index, layout, frame
// shape). Immutable and safe to share across threads.
class CodecKey {
 public:
  CodecKey(CodecParams params, FrameShape shape);

  const CodecParams& params() const { return params_; }
  const FrameShape& frame_shape() const { return shape_; }
  std::size_t bits() const { return params_.bits; }
  std::span<const float> carrier(std::size_t j) const;

  // Same carriers, different decoder or embedding settings.
  CodecKey with_activation(Activation a) const;
  CodecKey with_strength(double strength) const;
  CodecKey with_gain(double gain) const;

 private:
  CodecParams params_;
  FrameShape shape_;
  std::vector<float> carriers_;  // bits × shape.size()
};

// Pre-activation score ⟨frame − 0.5, carrier_j⟩ / (H·W·C) for every bit.
std::vector<double> carrier_correlations(FrameView frame, const CodecKey& key);

Video embed(const Video& video, const CodecKey& key, const Watermark& wm);
std::vector<double> decode_frame(FrameView frame, const CodecKey& key);
LogitMatrix decode_video(const Video& video, const CodecKey& key);

// ∂(Σ_j weights_j · logit_j)/∂frame, same layout as the frame.
std::vector<double> decoder_gradient(FrameView frame, const CodecKey& key, std::span<const double> bit_weights);

}  // namespace vwm
