#include "vwm/perturb/perturb.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <tuple>

#include "vwm/core/error.hpp"
#include "vwm/core/rng.hpp"

namespace vwm {

namespace {

constexpr std::pair<PerturbationKind, std::string_view> kNames[] = {
    {PerturbationKind::jpeg, "jpeg"},
    {PerturbationKind::gaussian_noise, "gaussian-noise"},
    {PerturbationKind::gaussian_blur, "gaussian-blur"},
    {PerturbationKind::crop, "crop"},
    {PerturbationKind::mpeg4, "mpeg4"},
    {PerturbationKind::frame_average, "frame-average"},
    {PerturbationKind::frame_swap, "frame-swap"},
    {PerturbationKind::frame_removal, "frame-removal"},
};

// Reflect-101 indexing (d c b | a b c d | c b a), valid for any offset.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

bool is_integer(double v) { return std::floor(v) == v; }

}  // namespace

std::string_view perturbation_name(PerturbationKind kind) {
  for (auto [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
  for (auto [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ParameterError("unknown perturbation '" + std::string(name) + "'");
}

bool is_image_based(PerturbationKind kind) {
  return kind == PerturbationKind::jpeg || kind == PerturbationKind::gaussian_noise ||
         kind == PerturbationKind::gaussian_blur || kind == PerturbationKind::crop;
}

Perturbation Perturbation::parse(std::string_view spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParameterError("perturbation must be kind:param, got '" + std::string(spec) + "'");
  Perturbation p;
  p.kind = parse_perturbation_kind(spec.substr(0, colon));
  const std::string value(spec.substr(colon + 1));
  std::size_t used = 0;
  try {
    p.parameter = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ParameterError("invalid perturbation parameter '" + value + "'");
  p.seed = seed;
  p.validate();
  return p;
}

std::string Perturbation::to_string() const {
  std::ostringstream os;
  os << perturbation_name(kind) << ':' << parameter;
  return os.str();
}

void Perturbation::validate() const {
  const double v = parameter;
  if (!std::isfinite(v)) throw ParameterError("perturbation parameter must be finite");
  switch (kind) {
    case PerturbationKind::jpeg:
    case PerturbationKind::mpeg4:
      if (v < 1 || v > 100 || !is_integer(v)) throw ParameterError("quality Q must be an integer in [1,100]");
      break;
    case PerturbationKind::gaussian_noise:
    case PerturbationKind::gaussian_blur:
      if (v < 0) throw ParameterError("sigma must be >= 0");
      break;
    case PerturbationKind::crop:
      if (!(v > 0 && v <= 1)) throw ParameterError("crop proportion c must lie in (0,1]");
      break;
    case PerturbationKind::frame_average:
      if (v < 1 || !is_integer(v) || static_cast<long long>(v) % 2 == 0) {
        throw ParameterError("frame-average window N must be an odd integer >= 1");
      }
      break;
    case PerturbationKind::frame_swap:
    case PerturbationKind::frame_removal:
      if (!(v >= 0 && v <= 1)) throw ParameterError("probability p must lie in [0,1]");
      break;
  }
}

Frame gaussian_noise(const Frame& frame, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0)) throw ParameterError("sigma must be >= 0");
  if (sigma == 0) return frame;
  auto rng = make_rng(seed, 0x4015eULL);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> out(frame.pixels().begin(), frame.pixels().end());
  for (double& v : out) v = clamp_pixel(v + noise(rng));
  return Frame(frame.shape(), std::move(out));
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0)) throw ParameterError("sigma must be >= 0");
  if (sigma == 0) return {1.0};
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double w = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

Frame gaussian_blur(const Frame& frame, double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  if (kernel.size() == 1) return frame;
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const auto& s = frame.shape();
  std::vector<double> horizontal(s.size());
  for (std::size_t y = 0; y < s.height; ++y)
    for (std::size_t x = 0; x < s.width; ++x)
      for (std::size_t c = 0; c < s.channels; ++c) {
        double acc = 0.0;
        for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
          const std::size_t sx = reflect(static_cast<std::ptrdiff_t>(x) + t, s.width);
          acc += kernel[static_cast<std::size_t>(t + radius)] * frame.at(y, sx, c);
        }
        horizontal[(y * s.width + x) * s.channels + c] = acc;
      }
  std::vector<double> out(s.size());
  for (std::size_t y = 0; y < s.height; ++y)
    for (std::size_t x = 0; x < s.width; ++x)
      for (std::size_t c = 0; c < s.channels; ++c) {
        double acc = 0.0;
        for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
          const std::size_t sy = reflect(static_cast<std::ptrdiff_t>(y) + t, s.height);
          acc += kernel[static_cast<std::size_t>(t + radius)] * horizontal[(sy * s.width + x) * s.channels + c];
        }
        out[(y * s.width + x) * s.channels + c] = clamp_pixel(acc);
      }
  return Frame(s, std::move(out));
}

// Center crop keeping area fraction c (side factor √c), then bilinear resize
// back to H×W with half-pixel centers. Samples never leave the crop window.
Frame crop(const Frame& frame, double proportion) {
  if (!(proportion > 0 && proportion <= 1)) throw ParameterError("crop proportion c must lie in (0,1]");
  if (proportion == 1.0) return frame;
  const auto& s = frame.shape();
  const double side = std::sqrt(proportion);
  const auto ch = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(s.height) * side)));
  const auto cw = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(s.width) * side)));
  const std::size_t oy = (s.height - ch) / 2;
  const std::size_t ox = (s.width - cw) / 2;

  auto source = [](std::size_t i, std::size_t out_n, std::size_t in_n) {
    double p = (static_cast<double>(i) + 0.5) * static_cast<double>(in_n) / static_cast<double>(out_n) - 0.5;
    p = std::clamp(p, 0.0, static_cast<double>(in_n - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(p));
    const std::size_t i1 = std::min(i0 + 1, in_n - 1);
    return std::tuple{i0, i1, p - static_cast<double>(i0)};
  };

  std::vector<double> out(s.size());
  for (std::size_t y = 0; y < s.height; ++y) {
    const auto [y0, y1, fy] = source(y, s.height, ch);
    for (std::size_t x = 0; x < s.width; ++x) {
      const auto [x0, x1, fx] = source(x, s.width, cw);
      for (std::size_t c = 0; c < s.channels; ++c) {
        const double a = frame.at(oy + y0, ox + x0, c);
        const double b = frame.at(oy + y0, ox + x1, c);
        const double d = frame.at(oy + y1, ox + x0, c);
        const double e = frame.at(oy + y1, ox + x1, c);
        const double top = a + fx * (b - a);
        const double bottom = d + fx * (e - d);
        out[(y * s.width + x) * s.channels + c] = clamp_pixel(top + fy * (bottom - top));
      }
    }
  }
  return Frame(s, std::move(out));
}

Video frame_average(const Video& video, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw ParameterError("frame-average window N must be an odd integer >= 1");
  if (window == 1) return video;
  const std::size_t F = video.frame_count();
  const std::size_t half = window / 2;
  const std::size_t size = video.frame_shape().size();
  std::vector<double> out(video.shape().size());
  for (std::size_t i = 0; i < F; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(F - 1, i + half);
    double* dst = out.data() + i * size;
    for (std::size_t t = lo; t <= hi; ++t) {
      auto src = video.frame_pixels(t);
      for (std::size_t p = 0; p < size; ++p) dst[p] += src[p];
    }
    const double count = static_cast<double>(hi - lo + 1);
    for (std::size_t p = 0; p < size; ++p) dst[p] = clamp_pixel(dst[p] / count);
  }
  return Video(video.shape(), std::move(out));
}

Video frame_swap(const Video& video, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw ParameterError("probability p must lie in [0,1]");
  const std::size_t F = video.frame_count();
  std::vector<std::size_t> order(F);
  for (std::size_t i = 0; i < F; ++i) order[i] = i;
  auto rng = make_rng(seed, 0x5a4bULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t i = 0; i < F && F > 1; ++i) {
    if (uni(rng) >= p) continue;
    std::size_t partner;
    if (i == 0) {
      partner = 1;
    } else if (i == F - 1) {
      partner = F - 2;
    } else {
      partner = uni(rng) < 0.5 ? i - 1 : i + 1;
    }
    std::swap(order[i], order[partner]);
  }
  std::vector<Frame> frames;
  frames.reserve(F);
  for (std::size_t i : order) frames.push_back(video.frame_copy(i));
  return Video::from_frames(frames);
}

Video frame_removal(const Video& video, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw ParameterError("probability p must lie in [0,1]");
  auto rng = make_rng(seed, 0x7e40ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Frame> kept;
  for (std::size_t i = 0; i < video.frame_count(); ++i) {
    if (uni(rng) >= p) kept.push_back(video.frame_copy(i));
  }
  if (kept.empty()) kept.push_back(video.frame_copy(0));
  return Video::from_frames(kept);
}

Video apply(const Perturbation& perturbation, const Video& video, const Mpeg4Options& mpeg4) {
  perturbation.validate();
  const double v = perturbation.parameter;
  if (is_image_based(perturbation.kind)) {
    std::vector<Frame> frames;
    frames.reserve(video.frame_count());
    for (std::size_t i = 0; i < video.frame_count(); ++i) {
      const Frame f = video.frame_copy(i);
      switch (perturbation.kind) {
        case PerturbationKind::jpeg:
          frames.push_back(jpeg(f, static_cast<int>(v)));
          break;
        case PerturbationKind::gaussian_noise:
          frames.push_back(gaussian_noise(f, v, hash3(perturbation.seed, 0xf7a3eULL, i)));
          break;
        case PerturbationKind::gaussian_blur:
          frames.push_back(gaussian_blur(f, v));
          break;
        default:
          frames.push_back(crop(f, v));
          break;
      }
    }
    return Video::from_frames(frames);
  }
  switch (perturbation.kind) {
    case PerturbationKind::frame_average:
      return frame_average(video, static_cast<std::size_t>(v));
    case PerturbationKind::frame_swap:
      return frame_swap(video, v, perturbation.seed);
    case PerturbationKind::frame_removal:
      return frame_removal(video, v, perturbation.seed);
    default:
      return mpeg4_external(video, static_cast<int>(v), mpeg4);
  }
}

}  // namespace vwm
