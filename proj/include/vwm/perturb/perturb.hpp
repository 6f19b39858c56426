#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vwm/core/video.hpp"

namespace vwm {

enum class PerturbationKind {
  jpeg,
  gaussian_noise,
  gaussian_blur,
  crop,
  mpeg4,
  frame_average,
  frame_swap,
  frame_removal,
};

std::string_view perturbation_name(PerturbationKind kind);
PerturbationKind parse_perturbation_kind(std::string_view name);
bool is_image_based(PerturbationKind kind);

struct Mpeg4Options {
  bool enabled = false;
  // Shell command run once per call; {input}, {output}, {Q}, {F}, {H}, {W}
  // and {C} are substituted. The command must read raw 8-bit interleaved
  // frames from {input} and leave the decoded frames in {output}, same layout.
  std::string command_template;
};

struct Perturbation {
  PerturbationKind kind = PerturbationKind::gaussian_noise;
  double parameter = 0.0;  // Q, σ, c, N or p depending on kind
  std::uint64_t seed = 0;

  // Parses "kind:param", e.g. "jpeg:50" or "frame-swap:0.2".
  static Perturbation parse(std::string_view spec, std::uint64_t seed = 0);
  std::string to_string() const;
  void validate() const;
};

// Image-based, applied to one frame.
Frame jpeg(const Frame& frame, int quality);
Frame gaussian_noise(const Frame& frame, double sigma, std::uint64_t seed);
Frame gaussian_blur(const Frame& frame, double sigma);
Frame crop(const Frame& frame, double proportion);

// Video-based.
Video frame_average(const Video& video, std::size_t window);
Video frame_swap(const Video& video, double p, std::uint64_t seed);
Video frame_removal(const Video& video, double p, std::uint64_t seed);
Video mpeg4_external(const Video& video, int quality, const Mpeg4Options& options);

// Maps image-based kinds over frames (frame i uses a seed derived from
// (seed, i)); video-based kinds see the whole sequence.
Video apply(const Perturbation& perturbation, const Video& video, const Mpeg4Options& mpeg4 = {});

// Normalized 1-D Gaussian taps, radius ⌈3σ⌉. σ = 0 yields {1}.
std::vector<double> gaussian_kernel(double sigma);

}  // namespace vwm
