#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vwm/core/container.hpp"
#include "vwm/core/error.hpp"
#include "vwm/perturb/perturb.hpp"

namespace vwm {

namespace {

std::string substitute(std::string text, const std::string& token, const std::string& value) {
  for (auto at = text.find(token); at != std::string::npos; at = text.find(token, at + value.size())) {
    text.replace(at, token.size(), value);
  }
  return text;
}

bool executable_available(const std::string& command) {
  std::istringstream is(command);
  std::string program;
  is >> program;
  if (program.empty()) return false;
  namespace fs = std::filesystem;
  if (program.find('/') != std::string::npos) return access(program.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (path == nullptr) return false;
  std::istringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    const fs::path candidate = fs::path(dir.empty() ? "." : dir) / program;
    if (access(candidate.c_str(), X_OK) == 0) return true;
  }
  return false;
}

std::string quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("vwm-mpeg4-" + std::to_string(getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace

Video mpeg4_external(const Video& video, int quality, const Mpeg4Options& options) {
  if (quality < 1 || quality > 100) throw ParameterError("quality Q must lie in [1,100]");
  if (!options.enabled) throw CapabilityError("MPEG-4 perturbation is disabled; enable it and configure an encoder command");
  if (!executable_available(options.command_template)) {
    throw CapabilityError("MPEG-4 encoder not found for command '" + options.command_template + "'");
  }

  TempDir tmp;
  const auto input = tmp.path / "input.raw";
  const auto output = tmp.path / "output.raw";
  std::vector<std::uint8_t> raw;
  raw.reserve(video.shape().size());
  for (double v : video.pixels()) raw.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  write_file_atomic(input, raw);

  const auto& s = video.shape();
  std::string cmd = options.command_template;
  cmd = substitute(cmd, "{input}", quote(input));
  cmd = substitute(cmd, "{output}", quote(output));
  cmd = substitute(cmd, "{Q}", std::to_string(quality));
  cmd = substitute(cmd, "{F}", std::to_string(s.frames));
  cmd = substitute(cmd, "{H}", std::to_string(s.frame.height));
  cmd = substitute(cmd, "{W}", std::to_string(s.frame.width));
  cmd = substitute(cmd, "{C}", std::to_string(s.frame.channels));

  const int status = std::system(cmd.c_str());
  if (status != 0) throw CapabilityError("MPEG-4 encoder command exited with status " + std::to_string(status));
  if (!std::filesystem::exists(output)) throw IoError("MPEG-4 encoder produced no output file");

  const auto decoded = read_file(output);
  if (decoded.size() != s.size()) {
    throw DimensionError("MPEG-4 round trip changed the video size: expected " + std::to_string(s.size()) +
                         " bytes, got " + std::to_string(decoded.size()));
  }
  std::vector<double> pixels(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) pixels[i] = static_cast<double>(decoded[i]) / 255.0;
  return Video(s, std::move(pixels));
}

}  // namespace vwm
