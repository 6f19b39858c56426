#include <cmath>
#include <random>

#include "vwm/attack/blackbox.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

GaussianInit removal_init_gaussian(const Video& video, const LabelOracle& oracle, std::uint64_t seed,
                                   const GaussianInitConfig& cfg) {
  if (!(cfg.sigma0 > 0.0) || !(cfg.factor > 1.0) || !(cfg.sigma_cap >= cfg.sigma0)) {
    throw ParameterError("invalid Gaussian escalation schedule");
  }
  const std::size_t start = oracle.queries();
  if (oracle(video) != Verdict::watermarked) {
    throw InitializationError("removal initialization needs a video labelled watermarked");
  }
  const auto px = video.pixels();
  std::size_t step = 0;
  for (double sigma = cfg.sigma0; sigma <= cfg.sigma_cap * (1.0 + 1e-12); sigma *= cfg.factor, ++step) {
    std::mt19937_64 rng = make_rng(seed, hash3(0x6a055, step, 0));
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> out(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) out[i] = clamp_pixel(px[i] + noise(rng));
    Video candidate(video.shape(), std::move(out));
    if (oracle(candidate) == Verdict::unwatermarked) {
      return {std::move(candidate), sigma, oracle.queries() - start};
    }
  }
  throw InitializationError("Gaussian noise up to sigma " + std::to_string(cfg.sigma_cap) +
                            " did not remove the watermark");
}

Video forgery_init_unrelated(const VideoShape& shape, const CodecKey& key, const Watermark& wg, std::uint64_t seed) {
  validate_shape(shape);
  std::mt19937_64 rng = make_rng(seed, 0xf0e6e);
  std::uniform_real_distribution<double> noise(0.25, 0.75);
  std::vector<double> px(shape.frames * shape.frame.size());
  for (auto& p : px) p = noise(rng);
  return embed(Video(shape, std::move(px)), key, wg);
}

}  // namespace vwm
