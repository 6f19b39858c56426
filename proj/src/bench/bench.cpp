#include "vwm/bench/bench.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

#include "json.hpp"
#include "vwm/attack/blackbox.hpp"
#include "vwm/core/container.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/parallel.hpp"
#include "vwm/core/rng.hpp"
#include "vwm/core/synth.hpp"
#include "vwm/threshold/threshold.hpp"
#include "vwm/version.hpp"

namespace vwm {

using nlohmann::json;

namespace {

double eval_rate(std::span<const Video> videos, const Detector& detector, const std::optional<Perturbation>& p,
                 const Mpeg4Options& mpeg4, Verdict counted) {
  if (videos.empty()) throw ParameterError("cannot evaluate an empty video set");
  std::size_t hits = 0;
  for (const auto& v : videos) {
    const Verdict verdict = p ? detector(apply(*p, v, mpeg4)) : detector(v);
    if (verdict == counted) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(videos.size());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool is_fast(std::size_t i, double fraction) {
  return std::floor(static_cast<double>(i + 1) * fraction) > std::floor(static_cast<double>(i) * fraction);
}

struct Condition {
  std::optional<PerturbationKind> kind;  // nullopt: clean baseline
  double parameter = 0.0;
};

struct VideoOutcome {
  LogitMatrix marked{1, 1, {0.0}};
  LogitMatrix clean{1, 1, {0.0}};
  double psnr = 0.0;
  double ssim = 0.0;
};

}  // namespace

Detector make_detector(const CodecKey& key, const Watermark& wg, const AggregationStrategy& strategy) {
  strategy.validate();
  auto shared = std::make_shared<const CodecKey>(key);
  return [shared, wg, strategy](const Video& v) { return detect(decode_video(v, *shared), wg, strategy).verdict; };
}

double eval_fnr(std::span<const Video> watermarked, const Detector& detector,
                const std::optional<Perturbation>& perturbation, const Mpeg4Options& mpeg4) {
  return eval_rate(watermarked, detector, perturbation, mpeg4, Verdict::unwatermarked);
}

double eval_fpr(std::span<const Video> unwatermarked, const Detector& detector,
                const std::optional<Perturbation>& perturbation, const Mpeg4Options& mpeg4) {
  return eval_rate(unwatermarked, detector, perturbation, mpeg4, Verdict::watermarked);
}

BenchReport run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  BenchReport report;
  const std::size_t n = cfg.codec.bits;
  const std::size_t count = cfg.videos.count;
  report.tau = cfg.tau ? *cfg.tau : select_tau(n, cfg.eta);
  std::optional<std::string> k_error;
  if (cfg.k) {
    report.k = *cfg.k;
  } else {
    try {
      report.k = select_k(cfg.videos.frames, fpr_of_tau(n, report.tau), cfg.eta);
    } catch (const Error& e) {
      k_error = e.what();
    }
  }
  if (report.k == 0 && !k_error) k_error = "detection threshold k resolved to 0";

  const Watermark wg = Watermark::random(n, hash3(cfg.seed, 0x3a7e, 0));
  const FrameShape fshape{cfg.videos.height, cfg.videos.width, cfg.videos.channels};

  std::vector<std::shared_ptr<const CodecKey>> keys(cfg.per_video_keys ? count : 1);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    CodecParams params = cfg.codec;
    if (cfg.per_video_keys) params.seed = hash3(cfg.codec.seed, 0x6b, i);
    keys[i] = std::make_shared<const CodecKey>(params, fshape);
  }
  auto key_of = [&](std::size_t i) -> const CodecKey& { return *keys[cfg.per_video_keys ? i : 0]; };

  std::vector<Video> clean, marked;
  std::vector<bool> fast(count);
  clean.reserve(count);
  marked.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    fast[i] = is_fast(i, cfg.videos.fast_fraction);
    SynthSpec spec{cfg.videos.frames, cfg.videos.height, cfg.videos.width, cfg.videos.channels,
                   fast[i] ? Motion::fast : Motion::slow};
    clean.push_back(synth_video(spec, hash3(cfg.seed, 0x5e7, i)));
    marked.push_back(embed(clean.back(), key_of(i), wg));
  }

  std::vector<AggregationStrategy> strategies;
  for (auto kind : cfg.strategies) {
    AggregationStrategy s{kind, report.tau, std::nullopt};
    if (kind == StrategyKind::detection_threshold) s.k = report.k;
    strategies.push_back(s);
  }

  std::vector<Condition> conditions{{}};
  for (const auto& sweep : cfg.perturbations) {
    for (double p : sweep.parameters) conditions.push_back({sweep.kind, p});
  }

  for (const auto& cond : conditions) {
    const std::string label = cond.kind ? std::string(perturbation_name(*cond.kind)) : "none";
    std::vector<VideoOutcome> outcomes(count);
    std::optional<std::string> error;
    try {
      parallel_for(count, [&](std::size_t i) {
        VideoOutcome& out = outcomes[i];
        if (!cond.kind) {
          out.marked = decode_video(marked[i], key_of(i));
          out.clean = decode_video(clean[i], key_of(i));
          out.psnr = kPsnrInfinity;
          out.ssim = 1.0;
          return;
        }
        const Perturbation p{*cond.kind, cond.parameter, hash3(cfg.seed, 0x9e27, i)};
        const Video pm = apply(p, marked[i], cfg.mpeg4);
        const Video pc = apply(p, clean[i], cfg.mpeg4);
        out.marked = decode_video(pm, key_of(i));
        out.clean = decode_video(pc, key_of(i));
        const bool comparable = pm.shape() == marked[i].shape();
        out.psnr = comparable ? psnr(pm, marked[i]) : std::nan("");
        out.ssim = comparable && fshape.height >= 11 && fshape.width >= 11 ? ssim(pm, marked[i]) : std::nan("");
      });
    } catch (const std::exception& e) {
      error = e.what();
    }

    double psnr_mean = std::nan(""), ssim_mean = std::nan("");
    if (!error) {
      std::vector<double> ps, ss;
      for (const auto& o : outcomes) {
        ps.push_back(o.psnr);
        ss.push_back(o.ssim);
      }
      psnr_mean = mean_of(ps);
      ssim_mean = mean_of(ss);
    }

    for (const auto& strategy : strategies) {
      CellRecord cell;
      cell.strategy = strategy.kind;
      cell.perturbation = label;
      cell.parameter = cond.parameter;
      cell.n_videos = count;
      cell.error = error;
      if (!cell.error && strategy.kind == StrategyKind::detection_threshold && k_error) cell.error = k_error;
      if (cell.error) {
        cell.fnr = cell.fpr = cell.psnr_mean = cell.ssim_mean = std::nan("");
      } else {
        std::size_t misses = 0, false_alarms = 0;
        for (const auto& o : outcomes) {
          if (detect(o.marked, wg, strategy).verdict == Verdict::unwatermarked) ++misses;
          if (detect(o.clean, wg, strategy).verdict == Verdict::watermarked) ++false_alarms;
        }
        cell.fnr = static_cast<double>(misses) / static_cast<double>(count);
        cell.fpr = static_cast<double>(false_alarms) / static_cast<double>(count);
        cell.psnr_mean = psnr_mean;
        cell.ssim_mean = ssim_mean;
      }
      report.cells.push_back(std::move(cell));
    }

    TTestRecord tt;
    tt.perturbation = label;
    tt.parameter = cond.parameter;
    tt.error = error;
    if (!tt.error) {
      std::vector<double> slow_ba, fast_ba;
      for (std::size_t i = 0; i < count; ++i) (fast[i] ? fast_ba : slow_ba).push_back(ba_mean(outcomes[i].marked, wg));
      try {
        tt.result = two_tailed_t_test(slow_ba, fast_ba);
      } catch (const Error& e) {
        tt.error = e.what();
      }
    }
    report.t_tests.push_back(std::move(tt));
  }

  for (std::size_t a = 0; a < cfg.attacks.size(); ++a) {
    const AttackSpec& spec = cfg.attacks[a];
    const std::string name = std::string(attack_kind_name(spec.kind)) + "-" + std::string(attack_mode_name(spec.mode));
    for (std::size_t i = 0; i < spec.videos; ++i) {
      AttackRecord rec;
      rec.name = name;
      rec.video = i;
      const std::uint64_t seed = hash3(cfg.seed, 0xa77ac, a * count + i);
      const bool removal = spec.mode == AttackMode::removal;
      const Video& input = removal ? marked[i] : clean[i];
      const Verdict wanted = removal ? Verdict::unwatermarked : Verdict::watermarked;
      try {
        AggregationStrategy strategy{spec.strategy, report.tau, std::nullopt};
        if (spec.strategy == StrategyKind::detection_threshold) {
          if (k_error) throw InfeasibleError(*k_error);
          strategy.k = report.k;
        }
        const CodecKey& key = key_of(i);
        switch (spec.kind) {
          case AttackKind::pgd: {
            WhiteboxConfig wc;
            wc.mode = spec.mode;
            wc.epsilon = spec.epsilon;
            wc.steps = spec.queries;
            rec.trace.best_video = pgd_bounded(input, key, wg, wc).video;
            break;
          }
          case AttackKind::square: {
            const auto oracle = make_score_oracle(key, wg, strategy);
            SquareConfig sc;
            sc.mode = spec.mode;
            sc.epsilon = spec.epsilon;
            sc.max_queries = spec.queries;
            sc.seed = seed;
            rec.trace = square_attack(input, oracle, sc);
            break;
          }
          case AttackKind::triangle: {
            const auto oracle = make_label_oracle(key, wg, strategy);
            const Video init = removal ? removal_init_gaussian(input, oracle, seed).video
                                       : forgery_init_unrelated(input.shape(), key, wg, seed);
            TriangleConfig tc;
            tc.max_queries = spec.queries;
            tc.seed = seed;
            rec.trace = triangle_attack(input, oracle, init, wanted, tc);
            break;
          }
          case AttackKind::subset:
            throw ParameterError("subset attacks are not part of the benchmark sweep");
        }
        rec.final_verdict = detect(decode_video(*rec.trace.best_video, key), wg, strategy).verdict;
        rec.final_linf = linf_distance(*rec.trace.best_video, input);
        rec.succeeded = rec.final_verdict == wanted;
      } catch (const AttackAborted& e) {
        rec.trace = e.trace();
        rec.error = e.what();
      } catch (const Error& e) {
        rec.error = e.what();
      }
      report.attacks.push_back(std::move(rec));
    }
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::string out = "strategy,perturbation,parameter,fnr,fpr,psnr_mean,ssim_mean,n_videos\n";
  for (const auto& c : report.cells) {
    out += std::string(strategy_name(c.strategy)) + "," + c.perturbation + "," + format_number(c.parameter) + "," +
           format_number(c.fnr) + "," + format_number(c.fpr) + "," + format_number(c.psnr_mean) + "," +
           format_number(c.ssim_mean) + "," + std::to_string(c.n_videos) + "\n";
  }
  return out;
}

std::string report_manifest_json(const BenchReport& report, const BenchConfig& cfg) {
  const std::string config_text = bench_config_json(cfg);
  json j;
  j["tool"] = "vwm";
  j["version"] = kVersion;
  j["config"] = json::parse(config_text);
  j["config_hash"] = fnv1a_hex(config_text);
  j["seeds"] = {{"master", cfg.seed},
                {"codec", cfg.codec.seed},
                {"watermark", hash3(cfg.seed, 0x3a7e, 0)}};
  j["tau"] = report.tau.to_string();
  j["k"] = report.k;
  j["cells"] = report.cells.size();
  json errors = json::array();
  for (const auto& c : report.cells) {
    if (c.error) {
      errors.push_back({{"strategy", strategy_name(c.strategy)},
                        {"perturbation", c.perturbation},
                        {"parameter", c.parameter},
                        {"error", *c.error}});
    }
  }
  j["errors"] = errors;
  json tests = json::array();
  for (const auto& t : report.t_tests) {
    json row = {{"perturbation", t.perturbation}, {"parameter", t.parameter}, {"groups", "slow-vs-fast"}};
    if (t.result) {
      row["t"] = number_json(t.result->t);
      row["df"] = number_json(t.result->df);
      row["p_value"] = number_json(t.result->p_value);
    } else {
      row["error"] = t.error.value_or("");
    }
    tests.push_back(row);
  }
  j["t_tests"] = tests;
  json attacks = json::array();
  for (const auto& a : report.attacks) {
    json row = {{"attack", a.name},
                {"video", a.video},
                {"queries", a.trace.queries_used},
                {"trace", "traces/" + a.name + "_" + std::to_string(a.video) + ".csv"}};
    if (a.error) {
      row["error"] = *a.error;
    } else {
      row["final_verdict"] = verdict_name(a.final_verdict);
      row["final_linf"] = number_json(a.final_linf);
      row["succeeded"] = a.succeeded;
    }
    attacks.push_back(row);
  }
  j["attacks"] = attacks;
  return j.dump(2) + "\n";
}

void write_report(const BenchReport& report, const BenchConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir / "traces", ec);
  if (ec) throw IoError("cannot create " + (cfg.output_dir / "traces").string() + ": " + ec.message());
  write_file_atomic(cfg.output_dir / "report.csv", report_csv(report));
  write_file_atomic(cfg.output_dir / "manifest.json", report_manifest_json(report, cfg));
  for (const auto& a : report.attacks) {
    const std::string stem = a.name + "_" + std::to_string(a.video);
    write_file_atomic(cfg.output_dir / "traces" / (stem + ".csv"), trace_csv(a.trace));
    write_file_atomic(cfg.output_dir / "traces" / (stem + ".json"),
                      trace_summary_json(a.trace, a.final_verdict, a.final_linf));
  }
}

}  // namespace vwm
