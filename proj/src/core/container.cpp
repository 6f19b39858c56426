#include "vwm/core/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "vwm/core/error.hpp"

namespace vwm {

namespace {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

constexpr char kMagic[4] = {'V', 'M', 'B', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

std::uint32_t to_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw DimensionError(std::string(what) + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_container(const Video& video) {
  const auto& s = video.shape();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + s.size() * 4);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, to_u32(s.frames, "frame count"));
  put_u32(out, to_u32(s.frame.height, "height"));
  put_u32(out, to_u32(s.frame.width, "width"));
  put_u32(out, to_u32(s.frame.channels, "channels"));
  for (double v : video.pixels()) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    put_u32(out, bits);
  }
  return out;
}

Video decode_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic, not a VMB1 file");
    throw TruncationError("truncated header: " + std::to_string(bytes.size()) + " bytes");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic, not a VMB1 file");
  VideoShape shape{get_u32(bytes, 4), {get_u32(bytes, 8), get_u32(bytes, 12), get_u32(bytes, 16)}};

  // Multiply in 64 bits with explicit overflow checks before trusting the size.
  std::uint64_t count = 1;
  for (std::uint64_t d : {std::uint64_t{shape.frames}, std::uint64_t{shape.frame.height},
                          std::uint64_t{shape.frame.width}, std::uint64_t{shape.frame.channels}}) {
    if (d != 0 && count > std::numeric_limits<std::uint64_t>::max() / 4 / d) {
      throw DimensionError("container dimensions overflow");
    }
    count *= d;
  }
  validate_shape(shape);
  const std::uint64_t payload = bytes.size() - kHeaderSize;
  if (payload < count * 4) {
    throw TruncationError("truncated payload: expected " + std::to_string(count * 4) + " bytes, found " +
                          std::to_string(payload));
  }
  if (payload > count * 4) throw FormatError("trailing bytes after payload");

  std::vector<double> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    pixels[i] = static_cast<double>(std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i)));
  }
  try {
    return Video(shape, std::move(pixels));
  } catch (const ParameterError& e) {
    throw FormatError(std::string("invalid pixel data: ") + e.what());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Video read_container(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_container(bytes);
  } catch (const TruncationError& e) {
    throw TruncationError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_container(const Video& video, const std::filesystem::path& path) {
  write_file_atomic(path, encode_container(video));
}

Video load_video(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file or directory: '" + path.string() + "'");
  if (std::filesystem::is_directory(path)) return read_png_dir(path);
  return read_container(path);
}

void save_video(const Video& video, const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path) || path.extension() != ".vmb") {
    write_png_dir(video, path);
  } else {
    write_container(video, path);
  }
}

}  // namespace vwm
