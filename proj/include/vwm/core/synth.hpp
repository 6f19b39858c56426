#pragma once

#include <cstdint>

#include "vwm/core/video.hpp"

namespace vwm {

enum class Motion { slow, fast };

struct SynthSpec {
  std::size_t frames = 14;
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t channels = 3;
  Motion motion = Motion::slow;
};

// Procedural content: a translating linear ramp plus a handful of drifting
// low-frequency sinusoids (band-limited texture). Pure function of (spec, seed).
Video synth_video(const SynthSpec& spec, std::uint64_t seed);

}  // namespace vwm
