#include "vwm/core/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "vwm/core/error.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

namespace {

struct Wave {
  double fx, fy, phase, amplitude, vx, vy;
  std::array<double, 3> color;
};

// Triangle wave with period 1 and range [-1, 1].
double triangle(double t) { return 4.0 * std::abs(t - std::floor(t + 0.5)) - 1.0; }

}  // namespace

Video synth_video(const SynthSpec& spec, std::uint64_t seed) {
  validate_shape({spec.frames, {spec.height, spec.width, spec.channels}});
  auto rng = make_rng(seed, 0x5717ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

  // Displacement per frame in units of the frame size.
  const double speed = spec.motion == Motion::fast ? 0.05 : 0.01;
  std::array<double, 3> base{range(0.35, 0.65), range(0.35, 0.65), range(0.35, 0.65)};

  const double ramp_angle = range(0.0, 2.0 * std::numbers::pi);
  const double ramp_amplitude = range(0.04, 0.08);
  const double ramp_velocity = range(0.5, 1.0) * speed;
  std::array<double, 3> ramp_color{range(0.3, 1.0), range(0.3, 1.0), range(0.3, 1.0)};

  std::array<Wave, 6> waves{};
  for (auto& w : waves) {
    w.fx = range(-3.0, 3.0);
    w.fy = range(-3.0, 3.0);
    w.phase = range(0.0, 2.0 * std::numbers::pi);
    w.amplitude = range(0.03, 0.09);
    w.vx = range(-1.0, 1.0) * speed;
    w.vy = range(-1.0, 1.0) * speed;
    w.color = {range(0.3, 1.0), range(0.3, 1.0), range(0.3, 1.0)};
  }

  const std::size_t C = spec.channels;
  std::vector<double> pixels(spec.frames * spec.height * spec.width * C);
  std::size_t at = 0;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double td = static_cast<double>(t);
    for (std::size_t yi = 0; yi < spec.height; ++yi) {
      const double y = static_cast<double>(yi) / static_cast<double>(spec.height);
      for (std::size_t xi = 0; xi < spec.width; ++xi) {
        const double x = static_cast<double>(xi) / static_cast<double>(spec.width);
        std::array<double, 3> v = base;
        const double r = triangle(0.5 * (x * std::cos(ramp_angle) + y * std::sin(ramp_angle)) + ramp_velocity * td);
        for (std::size_t c = 0; c < 3; ++c) v[c] += ramp_amplitude * r * ramp_color[c];
        for (const auto& w : waves) {
          const double s =
              w.amplitude * std::sin(2.0 * std::numbers::pi * (w.fx * (x + w.vx * td) + w.fy * (y + w.vy * td)) + w.phase);
          for (std::size_t c = 0; c < 3; ++c) v[c] += s * w.color[c];
        }
        if (C == 1) {
          pixels[at++] = clamp_pixel(0.299 * v[0] + 0.587 * v[1] + 0.114 * v[2]);
        } else {
          for (std::size_t c = 0; c < 3; ++c) pixels[at++] = clamp_pixel(v[c]);
        }
      }
    }
  }
  return Video({spec.frames, {spec.height, spec.width, C}}, std::move(pixels));
}

}  // namespace vwm
