#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "vwm/core/container.hpp"
#include "vwm/core/error.hpp"

namespace vwm {

namespace {

struct DecodedPng {
  std::size_t height;
  std::size_t width;
  std::size_t channels;
  std::vector<std::uint8_t> data;
};

DecodedPng decode_png(const std::filesystem::path& file) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, file.c_str())) {
    throw FormatError("cannot read PNG '" + file.string() + "': " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  DecodedPng out{image.height, image.width, color ? 3U : 1U, {}};
  out.data.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError("cannot decode PNG '" + file.string() + "': " + image.message);
  }
  return out;
}

}  // namespace

Video read_png_dir(const std::filesystem::path& dir) {
  std::map<unsigned long long, std::filesystem::path> frames;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    const auto index = std::stoull(stem);
    if (!frames.emplace(index, entry.path()).second) {
      throw FormatError("duplicate frame number " + stem + " in '" + dir.string() + "'");
    }
  }
  if (frames.empty()) throw FormatError("no numerically named PNG frames in '" + dir.string() + "'");

  std::vector<double> pixels;
  VideoShape shape{};
  for (const auto& [index, file] : frames) {
    DecodedPng png = decode_png(file);
    const FrameShape fs{png.height, png.width, png.channels};
    if (shape.frames == 0) {
      shape.frame = fs;
    } else if (fs != shape.frame) {
      throw DimensionError("frame '" + file.string() + "' differs in shape from the first frame");
    }
    ++shape.frames;
    for (std::uint8_t v : png.data) pixels.push_back(static_cast<double>(v) / 255.0);
  }
  return Video(shape, std::move(pixels));
}

void write_png_dir(const Video& video, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& fs = video.frame_shape();
  const std::size_t digits = std::to_string(video.frame_count() - 1).size();
  for (std::size_t f = 0; f < video.frame_count(); ++f) {
    std::vector<std::uint8_t> data;
    data.reserve(fs.size());
    for (double v : video.frame_pixels(f)) data.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(fs.width);
    image.height = static_cast<png_uint_32>(fs.height);
    image.format = fs.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::string name = std::to_string(f);
    name.insert(0, digits - name.size(), '0');
    const auto file = dir / (name + ".png");
    const auto tmp = dir / (name + ".png.tmp");
    if (!png_image_write_to_file(&image, tmp.c_str(), 0, data.data(), 0, nullptr)) {
      throw IoError("cannot write PNG '" + tmp.string() + "': " + image.message);
    }
    std::filesystem::rename(tmp, file);
  }
}

}  // namespace vwm
