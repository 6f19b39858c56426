#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vwm/aggregate/aggregate.hpp"
#include "vwm/attack/trace.hpp"
#include "vwm/attack/whitebox.hpp"
#include "vwm/bench/metrics.hpp"
#include "vwm/core/codec.hpp"
#include "vwm/perturb/perturb.hpp"

namespace vwm {

using Detector = std::function<Verdict(const Video&)>;

Detector make_detector(const CodecKey& key, const Watermark& wg, const AggregationStrategy& strategy);

// Fraction of videos whose (optionally perturbed) verdict is unwatermarked.
double eval_fnr(std::span<const Video> watermarked, const Detector& detector,
                const std::optional<Perturbation>& perturbation = std::nullopt, const Mpeg4Options& mpeg4 = {});
// Fraction of videos whose (optionally perturbed) verdict is watermarked.
double eval_fpr(std::span<const Video> unwatermarked, const Detector& detector,
                const std::optional<Perturbation>& perturbation = std::nullopt, const Mpeg4Options& mpeg4 = {});

struct PerturbationSweep {
  PerturbationKind kind = PerturbationKind::gaussian_noise;
  std::vector<double> parameters;
};

enum class AttackKind { pgd, subset, square, triangle };
std::string_view attack_kind_name(AttackKind kind);
AttackKind parse_attack_kind(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::square;
  AttackMode mode = AttackMode::removal;
  double epsilon = 0.05;
  std::size_t queries = 1000;  // black-box budget, or PGD steps
  std::size_t videos = 1;      // first N videos of the set
  StrategyKind strategy = StrategyKind::ba_mean;
};

struct VideoSetSpec {
  std::size_t count = 50;
  std::size_t frames = 14;
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t channels = 3;
  double fast_fraction = 0.5;  // share of fast-motion videos
};

struct BenchConfig {
  CodecParams codec;
  std::vector<StrategyKind> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::optional<Fraction> tau;  // default: select_tau(bits, eta)
  double eta = 1e-4;
  std::optional<std::size_t> k;  // default: select_k(F, fpr_of_tau(bits, τ), eta)
  std::vector<PerturbationSweep> perturbations;
  std::vector<AttackSpec> attacks;
  VideoSetSpec videos;
  std::uint64_t seed = 0;
  bool per_video_keys = false;
  std::filesystem::path output_dir = "bench_out";
  Mpeg4Options mpeg4;

  void validate() const;
};

BenchConfig parse_bench_config(std::string_view json_text);
std::string bench_config_json(const BenchConfig& cfg);

struct CellRecord {
  StrategyKind strategy = StrategyKind::ba_mean;
  std::string perturbation;  // "none" for the clean baseline
  double parameter = 0.0;
  double fnr = 0.0;
  double fpr = 0.0;
  double psnr_mean = 0.0;  // perturbed vs unperturbed watermarked video
  double ssim_mean = 0.0;
  std::size_t n_videos = 0;
  std::optional<std::string> error;
};

struct TTestRecord {
  std::string perturbation;
  double parameter = 0.0;
  std::optional<TTestResult> result;  // slow- vs fast-motion BA-mean statistics
  std::optional<std::string> error;
};

struct AttackRecord {
  std::string name;
  std::size_t video = 0;
  AttackTrace trace;
  Verdict final_verdict = Verdict::unwatermarked;
  double final_linf = 0.0;
  bool succeeded = false;  // verdict ended on the attacker's side
  std::optional<std::string> error;
};

struct BenchReport {
  std::vector<CellRecord> cells;
  std::vector<TTestRecord> t_tests;
  std::vector<AttackRecord> attacks;
  Fraction tau;
  std::size_t k = 0;
};

BenchReport run_benchmark(const BenchConfig& cfg);

std::string report_csv(const BenchReport& report);
std::string report_manifest_json(const BenchReport& report, const BenchConfig& cfg);
// Writes report.csv, manifest.json and traces/ under cfg.output_dir.
void write_report(const BenchReport& report, const BenchConfig& cfg);

// Line chart of one CSV column against the parameter, one polyline per
// (strategy, perturbation) series.
std::string plot_svg(std::string_view csv_text, std::string_view metric = "fnr",
                     std::string_view perturbation = "");

}  // namespace vwm
