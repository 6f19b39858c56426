#include "vwm/core/video.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vwm/core/error.hpp"

namespace vwm {

namespace {

void validate_pixels(std::span<const double> pixels) {
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double v = pixels[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ParameterError("pixel " + std::to_string(i) + " outside [0,1]: " + std::to_string(v));
    }
  }
}

}  // namespace

void validate_shape(const VideoShape& shape) {
  if (shape.frames == 0 || shape.frame.height == 0 || shape.frame.width == 0) {
    throw DimensionError("video dimensions must be non-zero");
  }
  if (shape.frame.channels != 1 && shape.frame.channels != 3) {
    throw DimensionError("channel count must be 1 or 3, got " + std::to_string(shape.frame.channels));
  }
}

double clamp_pixel(double v) { return std::clamp(v, 0.0, 1.0); }

Frame::Frame(FrameShape shape, std::vector<double> pixels) : shape_(shape), pixels_(std::move(pixels)) {
  validate_shape({1, shape_});
  if (pixels_.size() != shape_.size()) {
    throw DimensionError("frame buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                         std::to_string(shape_.size()));
  }
  validate_pixels(pixels_);
}

Frame Frame::filled(FrameShape shape, double value) {
  return Frame(shape, std::vector<double>(shape.size(), value));
}

Video::Video(VideoShape shape, std::vector<double> pixels) : shape_(shape), pixels_(std::move(pixels)) {
  validate_shape(shape_);
  if (pixels_.size() != shape_.size()) {
    throw DimensionError("video buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                         std::to_string(shape_.size()));
  }
  validate_pixels(pixels_);
}

Video Video::filled(VideoShape shape, double value) {
  return Video(shape, std::vector<double>(shape.size(), value));
}

Video Video::from_frames(std::span<const Frame> frames) {
  if (frames.empty()) throw DimensionError("a video needs at least one frame");
  const FrameShape fs = frames.front().shape();
  std::vector<double> pixels;
  pixels.reserve(frames.size() * fs.size());
  for (const Frame& f : frames) {
    if (f.shape() != fs) throw DimensionError("frames differ in shape");
    pixels.insert(pixels.end(), f.pixels().begin(), f.pixels().end());
  }
  return Video({frames.size(), fs}, std::move(pixels));
}

std::span<const double> Video::frame_pixels(std::size_t i) const {
  if (i >= shape_.frames) throw DimensionError("frame index " + std::to_string(i) + " out of range");
  const std::size_t n = shape_.frame.size();
  return std::span<const double>(pixels_).subspan(i * n, n);
}

Frame Video::frame_copy(std::size_t i) const {
  auto px = frame_pixels(i);
  return Frame(shape_.frame, std::vector<double>(px.begin(), px.end()));
}

std::vector<Frame> Video::frames() const {
  std::vector<Frame> out;
  out.reserve(shape_.frames);
  for (std::size_t i = 0; i < shape_.frames; ++i) out.push_back(frame_copy(i));
  return out;
}

double linf_distance(const Video& a, const Video& b) {
  if (a.shape() != b.shape()) throw DimensionError("linf_distance: shape mismatch");
  double m = 0.0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
  return m;
}

}  // namespace vwm
