#include "vwm/core/codec.hpp"

#include <cmath>
#include <string>

#include "vwm/core/error.hpp"
#include "vwm/core/parallel.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_frame(const FrameShape& got, const CodecKey& key) {
  if (got != key.frame_shape()) {
    const auto& k = key.frame_shape();
    throw DimensionError("frame " + std::to_string(got.height) + "x" + std::to_string(got.width) + "x" +
                         std::to_string(got.channels) + " does not match key " + std::to_string(k.height) + "x" +
                         std::to_string(k.width) + "x" + std::to_string(k.channels));
  }
}

// Sign for coordinate `index` of carrier j: one 64-bit hash yields 64 signs.
float carrier_sign(std::uint64_t seed, std::size_t j, std::size_t index) {
  const std::uint64_t word = hash3(seed, j, index / 64);
  return ((word >> (index % 64)) & 1U) ? 1.0F : -1.0F;
}

}  // namespace

CodecKey::CodecKey(CodecParams params, FrameShape shape) : params_(params), shape_(shape) {
  validate_shape({1, shape_});
  if (params_.bits == 0) throw ParameterError("watermark length must be at least 1");
  if (!(params_.strength >= 0.0) || !std::isfinite(params_.strength)) throw ParameterError("strength must be >= 0");
  if (!(params_.gain > 0.0) || !std::isfinite(params_.gain)) throw ParameterError("gain must be > 0");

  const std::size_t size = shape_.size();
  carriers_.resize(params_.bits * size);
  for (std::size_t j = 0; j < params_.bits; ++j) {
    float* c = carriers_.data() + j * size;
    if (params_.layout == CarrierLayout::white) {
      for (std::size_t i = 0; i < size; ++i) c[i] = carrier_sign(params_.seed, j, i);
      continue;
    }
    const std::size_t ch = shape_.channels;
    const std::size_t pairs_per_row = (shape_.width + 1) / 2;
    for (std::size_t y = 0; y < shape_.height; ++y) {
      for (std::size_t p = 0; p < pairs_per_row; ++p) {
        for (std::size_t k = 0; k < ch; ++k) {
          const float s = carrier_sign(params_.seed, j, (y * pairs_per_row + p) * ch + k);
          const std::size_t x = 2 * p;
          c[(y * shape_.width + x) * ch + k] = s;
          if (x + 1 < shape_.width) c[(y * shape_.width + x + 1) * ch + k] = -s;
        }
      }
    }
  }
}

std::span<const float> CodecKey::carrier(std::size_t j) const {
  if (j >= params_.bits) throw DimensionError("carrier index out of range");
  return {carriers_.data() + j * shape_.size(), shape_.size()};
}

CodecKey CodecKey::with_activation(Activation a) const {
  CodecKey k = *this;
  k.params_.activation = a;
  return k;
}

CodecKey CodecKey::with_strength(double strength) const {
  if (!(strength >= 0.0)) throw ParameterError("strength must be >= 0");
  CodecKey k = *this;
  k.params_.strength = strength;
  return k;
}

CodecKey CodecKey::with_gain(double gain) const {
  if (!(gain > 0.0)) throw ParameterError("gain must be > 0");
  CodecKey k = *this;
  k.params_.gain = gain;
  return k;
}

std::vector<double> carrier_correlations(FrameView frame, const CodecKey& key) {
  check_frame(frame.shape, key);
  const std::size_t size = frame.shape.size();
  std::vector<double> centered(size);
  for (std::size_t i = 0; i < size; ++i) centered[i] = frame.pixels[i] - 0.5;
  std::vector<double> out(key.bits());
  for (std::size_t j = 0; j < key.bits(); ++j) {
    auto c = key.carrier(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < size; ++i) acc += centered[i] * c[i];
    out[j] = acc / static_cast<double>(size);
  }
  return out;
}

Video embed(const Video& video, const CodecKey& key, const Watermark& wm) {
  check_frame(video.frame_shape(), key);
  if (wm.size() != key.bits()) {
    throw DimensionError("watermark has " + std::to_string(wm.size()) + " bits, key expects " +
                         std::to_string(key.bits()));
  }
  const std::size_t size = key.frame_shape().size();
  const double amplitude = key.params().strength / std::sqrt(static_cast<double>(key.bits()));
  std::vector<double> pattern(size, 0.0);
  for (std::size_t j = 0; j < key.bits(); ++j) {
    const double s = wm[j] ? amplitude : -amplitude;
    auto c = key.carrier(j);
    for (std::size_t i = 0; i < size; ++i) pattern[i] += s * c[i];
  }
  std::vector<double> out(video.pixels().begin(), video.pixels().end());
  for (std::size_t f = 0; f < video.frame_count(); ++f) {
    double* px = out.data() + f * size;
    for (std::size_t i = 0; i < size; ++i) px[i] = clamp_pixel(px[i] + pattern[i]);
  }
  return Video(video.shape(), std::move(out));
}

std::vector<double> decode_frame(FrameView frame, const CodecKey& key) {
  std::vector<double> logits = carrier_correlations(frame, key);
  const double gain = key.params().gain;
  for (double& z : logits) {
    z = key.params().activation == Activation::sigmoid ? sigmoid(gain * z) : 0.5 + gain * z;
  }
  return logits;
}

LogitMatrix decode_video(const Video& video, const CodecKey& key) {
  check_frame(video.frame_shape(), key);
  const std::size_t n = key.bits();
  std::vector<double> values(video.frame_count() * n);
  parallel_for(video.frame_count(), [&](std::size_t f) {
    auto row = decode_frame(video.frame(f), key);
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(f * n));
  });
  return LogitMatrix(video.frame_count(), n, std::move(values));
}

std::vector<double> decoder_gradient(FrameView frame, const CodecKey& key, std::span<const double> bit_weights) {
  check_frame(frame.shape, key);
  if (bit_weights.size() != key.bits()) throw DimensionError("bit_weights length must equal watermark length");
  const std::size_t size = frame.shape.size();
  const double gain = key.params().gain;
  const bool sig = key.params().activation == Activation::sigmoid;
  const auto corr = sig ? carrier_correlations(frame, key) : std::vector<double>(key.bits(), 0.0);
  std::vector<double> grad(size, 0.0);
  for (std::size_t j = 0; j < key.bits(); ++j) {
    if (bit_weights[j] == 0.0) continue;
    double slope = gain / static_cast<double>(size);
    if (sig) {
      const double s = sigmoid(gain * corr[j]);
      slope *= s * (1.0 - s);
    }
    const double w = bit_weights[j] * slope;
    auto c = key.carrier(j);
    for (std::size_t i = 0; i < size; ++i) grad[i] += w * c[i];
  }
  return grad;
}

}  // namespace vwm
