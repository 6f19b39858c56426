#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vwm {

struct FrameShape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  std::size_t size() const { return height * width * channels; }
  bool operator==(const FrameShape&) const = default;
};

struct VideoShape {
  std::size_t frames = 0;
  FrameShape frame;

  std::size_t size() const { return frames * frame.size(); }
  bool operator==(const VideoShape&) const = default;
};

// Read-only view of one frame: row-major, channel-interleaved.
struct FrameView {
  FrameShape shape;
  std::span<const double> pixels;

  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels[(y * shape.width + x) * shape.channels + c];
  }
};

class Frame {
 public:
  Frame() = default;
  Frame(FrameShape shape, std::vector<double> pixels);
  static Frame filled(FrameShape shape, double value);

  const FrameShape& shape() const { return shape_; }
  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }
  FrameView view() const { return {shape_, pixels_}; }

  double& at(std::size_t y, std::size_t x, std::size_t c) {
    return pixels_[(y * shape_.width + x) * shape_.channels + c];
  }
  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels_[(y * shape_.width + x) * shape_.channels + c];
  }

  bool operator==(const Frame&) const = default;

 private:
  FrameShape shape_;
  std::vector<double> pixels_;
};

// F frames of identical H×W×C, stored frame-major in one buffer. A Video
// built through the public constructors always satisfies F ≥ 1, non-zero
// dimensions, C ∈ {1, 3} and finite pixels in [0, 1].
class Video {
 public:
  Video(VideoShape shape, std::vector<double> pixels);
  static Video filled(VideoShape shape, double value);
  static Video from_frames(std::span<const Frame> frames);

  const VideoShape& shape() const { return shape_; }
  const FrameShape& frame_shape() const { return shape_.frame; }
  std::size_t frame_count() const { return shape_.frames; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<const double> frame_pixels(std::size_t i) const;
  FrameView frame(std::size_t i) const { return {shape_.frame, frame_pixels(i)}; }
  Frame frame_copy(std::size_t i) const;
  std::vector<Frame> frames() const;

  bool operator==(const Video&) const = default;

 private:
  VideoShape shape_;
  std::vector<double> pixels_;
};

// Throws DimensionError unless the shape is non-empty and C ∈ {1, 3}.
void validate_shape(const VideoShape& shape);

double clamp_pixel(double v);

// Max absolute per-pixel difference; shapes must match.
double linf_distance(const Video& a, const Video& b);

}  // namespace vwm
