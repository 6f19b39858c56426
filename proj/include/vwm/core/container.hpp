#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vwm/core/video.hpp"

namespace vwm {

// `.vmb` layout, little-endian: "VMB1", u32 F, u32 H, u32 W, u32 C, then
// F·H·W·C float32 samples, frame-major, row-major, channel-interleaved.
std::vector<std::uint8_t> encode_container(const Video& video);
Video decode_container(std::span<const std::uint8_t> bytes);

Video read_container(const std::filesystem::path& path);
void write_container(const Video& video, const std::filesystem::path& path);

// Directory of numerically named 8-bit PNG frames (0.png, 1.png, ... or
// zero-padded), ordered by numeric value.
Video read_png_dir(const std::filesystem::path& dir);
void write_png_dir(const Video& video, const std::filesystem::path& dir);

// Dispatch on the path: a directory (or a path without the .vmb extension)
// is a PNG frame directory, anything else a container.
Video load_video(const std::filesystem::path& path);
void save_video(const Video& video, const std::filesystem::path& path);

// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace vwm
