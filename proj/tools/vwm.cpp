// vwm: command-line front end. Exit codes: 0 success, 1 domain error,
// 2 usage error.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vwm/attack/blackbox.hpp"
#include "vwm/bench/bench.hpp"
#include "vwm/core/container.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/synth.hpp"
#include "vwm/threshold/threshold.hpp"
#include "vwm/version.hpp"

namespace {

using nlohmann::json;
using namespace vwm;

// Codec and detector settings shared by embed, detect and attack. A
// --config file supplies defaults; explicit flags win.
struct CodecOptions {
  std::string config;
  std::uint64_t key_seed = 0;
  double alpha = 0.02;
  double gain = 50.0;
  std::string activation = "sigmoid";
  std::string layout = "highpass";
  std::size_t n = 32;
  std::string bits;
  std::uint64_t seed = 0;
  std::string strategy = "ba-mean";
  std::string tau;
  double eta = 1e-4;
  std::size_t k = 0;

  CLI::Option* o_key_seed = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_gain = nullptr;
  CLI::Option* o_activation = nullptr;
  CLI::Option* o_layout = nullptr;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_eta = nullptr;
  CLI::Option* o_k = nullptr;

  void add_to(CLI::App* app, bool detector) {
    app->add_option("--config", config, "JSON config (bench format); flags override it");
    o_key_seed = app->add_option("--key-seed", key_seed, "codec key seed")->capture_default_str();
    o_alpha = app->add_option("--alpha", alpha, "embedding strength")->capture_default_str();
    o_gain = app->add_option("--gain", gain, "decoder gain")->capture_default_str();
    o_activation = app->add_option("--activation", activation, "sigmoid or identity")
                       ->check(CLI::IsMember({"sigmoid", "identity"}))
                       ->capture_default_str();
    o_layout = app->add_option("--layout", layout, "carrier layout: highpass or white")
                   ->check(CLI::IsMember({"highpass", "white"}))
                   ->capture_default_str();
    o_n = app->add_option("--n", n, "watermark length in bits")->capture_default_str();
    app->add_option("--bits", bits, "watermark as hex, MSB first (default: random from --seed)");
    o_seed = app->add_option("--seed", seed, "seed for the watermark and any randomness")->capture_default_str();
    if (detector) {
      app->add_option("--strategy", strategy, "aggregation strategy, e.g. ba-mean")->capture_default_str();
      app->add_option("--tau", tau, "threshold as a fraction, e.g. 27/32 (default: from --eta)");
      o_eta = app->add_option("--eta", eta, "target FPR for default tau and k")->capture_default_str();
      o_k = app->add_option("--k", k, "frames needed by detection-threshold (default: from --eta)");
    }
  }

  BenchConfig resolve() const {
    BenchConfig cfg;
    if (!config.empty()) {
      const auto bytes = read_file(config);
      cfg = parse_bench_config(std::string(bytes.begin(), bytes.end()));
    }
    if (o_key_seed->count()) cfg.codec.seed = key_seed;
    if (o_alpha->count()) cfg.codec.strength = alpha;
    if (o_gain->count()) cfg.codec.gain = gain;
    if (o_activation->count()) cfg.codec.activation = activation == "identity" ? Activation::identity : Activation::sigmoid;
    if (o_layout->count()) cfg.codec.layout = layout == "white" ? CarrierLayout::white : CarrierLayout::highpass;
    if (o_n->count()) cfg.codec.bits = n;
    if (o_seed->count()) cfg.seed = seed;
    if (o_eta && o_eta->count()) cfg.eta = eta;
    if (o_k && o_k->count()) cfg.k = k;
    if (!tau.empty()) cfg.tau = Fraction::parse(tau);
    return cfg;
  }

  Watermark watermark(const BenchConfig& cfg) const {
    if (!bits.empty()) return Watermark::from_hex(bits, cfg.codec.bits);
    return Watermark::random(cfg.codec.bits, cfg.seed);
  }

  AggregationStrategy aggregation(const BenchConfig& cfg, std::size_t frames) const {
    AggregationStrategy s;
    s.kind = parse_strategy(strategy);
    s.tau = cfg.tau ? *cfg.tau : select_tau(cfg.codec.bits, cfg.eta);
    if (s.kind == StrategyKind::detection_threshold) {
      s.k = cfg.k ? *cfg.k : select_k(frames, fpr_of_tau(cfg.codec.bits, s.tau), cfg.eta);
    }
    s.validate();
    return s;
  }
};

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (!path.empty()) write_file_atomic(path, text);
  std::cout << text;
}

json detection_json(const DetectionResult& r, const AggregationStrategy& s) {
  json j;
  j["verdict"] = verdict_name(r.verdict);
  j["statistic"] = r.statistic;
  j["strategy"] = strategy_name(s.kind);
  j["tau"] = s.tau.to_string();
  if (s.k) j["k"] = *s.k;
  if (r.frame_decisions) j["frame_decisions"] = *r.frame_decisions;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Robustness toolkit for frame-level video watermarks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic video");
  std::string gen_out, gen_motion = "slow";
  SynthSpec gen_spec;
  std::uint64_t gen_seed = 0;
  gen->add_option("--output", gen_out, "output .vmb file or PNG directory")->required();
  gen->add_option("--frames", gen_spec.frames)->capture_default_str();
  gen->add_option("--height", gen_spec.height)->capture_default_str();
  gen->add_option("--width", gen_spec.width)->capture_default_str();
  gen->add_option("--channels", gen_spec.channels)->capture_default_str();
  gen->add_option("--motion", gen_motion)->check(CLI::IsMember({"slow", "fast"}))->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();

  // embed
  auto* emb = app.add_subcommand("embed", "Embed a watermark into a video");
  std::string emb_in, emb_out;
  CodecOptions emb_codec;
  emb->add_option("--input", emb_in)->required();
  emb->add_option("--output", emb_out)->required();
  emb_codec.add_to(emb, false);

  // detect
  auto* det = app.add_subcommand("detect", "Decode and aggregate a verdict");
  std::string det_in, det_out;
  CodecOptions det_codec;
  det->add_option("--input", det_in)->required();
  det->add_option("--output", det_out, "also write the JSON result here");
  det_codec.add_to(det, true);

  // perturb
  auto* per = app.add_subcommand("perturb", "Apply a common perturbation");
  std::string per_in, per_out, per_spec, per_cmd;
  std::uint64_t per_seed = 0;
  per->add_option("--input", per_in)->required();
  per->add_option("--output", per_out)->required();
  per->add_option("--perturb", per_spec, "kind:param, e.g. jpeg:50 or gaussian-noise:0.1")->required();
  per->add_option("--seed", per_seed)->capture_default_str();
  per->add_option("--mpeg4-cmd", per_cmd, "external encoder command template (enables mpeg4)");

  // attack
  auto* att = app.add_subcommand("attack", "Run a white- or black-box attack");
  std::string att_kind, att_mode = "removal", att_in, att_out, att_trace, att_mask, att_init;
  double att_eps = 0.05;
  std::size_t att_queries = 1000, att_steps = 0;
  std::optional<double> att_step_size;
  CodecOptions att_codec;
  att->add_option("--attack", att_kind, "pgd, subset, square or triangle")
      ->check(CLI::IsMember({"pgd", "subset", "square", "triangle"}))
      ->required();
  att->add_option("--mode", att_mode)->check(CLI::IsMember({"removal", "forgery"}))->capture_default_str();
  att->add_option("--input", att_in)->required();
  att->add_option("--output", att_out)->required();
  att->add_option("--eps", att_eps, "l-inf bound (pgd, square)")->capture_default_str();
  att->add_option("--queries", att_queries, "query budget (square, triangle)")->capture_default_str();
  att->add_option("--steps", att_steps, "optimizer steps (pgd: 200, subset: 500)");
  att->add_option("--step-size", att_step_size, "optimizer step size");
  att->add_option("--frames", att_mask, "attackable frames for subset, e.g. 0-2,7");
  att->add_option("--init", att_init, "starting video for triangle (default: generated)");
  att->add_option("--trace", att_trace, "write <prefix>.csv and <prefix>.json");
  att_codec.add_to(att, true);

  // threshold
  auto* thr = app.add_subcommand("threshold", "Select tau (and k) for a target FPR");
  std::size_t thr_n = 32, thr_frames = 0;
  double thr_eta = 1e-4;
  std::string thr_out;
  thr->add_option("--n", thr_n, "watermark length")->capture_default_str();
  thr->add_option("--eta", thr_eta, "target false-positive rate")->capture_default_str();
  thr->add_option("--frames", thr_frames, "also select k for this many frames");
  thr->add_option("--output", thr_out, "also write the JSON result here");

  // bench
  auto* ben = app.add_subcommand("bench", "Run a benchmark sweep from a JSON config");
  std::string ben_config, ben_out;
  std::uint64_t ben_seed = 0;
  ben->add_option("--config", ben_config, "benchmark config JSON")->required();
  ben->add_option("--output", ben_out, "output directory (overrides the config)");
  auto* o_ben_seed = ben->add_option("--seed", ben_seed, "master seed (overrides the config)");

  // plot
  auto* plt = app.add_subcommand("plot", "Render an SVG line chart from a report CSV");
  std::string plt_in, plt_out, plt_metric = "fnr", plt_pert;
  plt->add_option("--input", plt_in)->required();
  plt->add_option("--output", plt_out)->required();
  plt->add_option("--metric", plt_metric)
      ->check(CLI::IsMember({"fnr", "fpr", "psnr_mean", "ssim_mean"}))
      ->capture_default_str();
  plt->add_option("--perturbation", plt_pert, "only plot this perturbation kind");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    gen_spec.motion = gen_motion == "fast" ? Motion::fast : Motion::slow;
    save_video(synth_video(gen_spec, gen_seed), gen_out);
  } else if (emb->parsed()) {
    const auto cfg = emb_codec.resolve();
    const Video video = load_video(emb_in);
    const CodecKey key(cfg.codec, video.frame_shape());
    const Watermark wm = emb_codec.watermark(cfg);
    save_video(embed(video, key, wm), emb_out);
    std::cout << json{{"watermark", wm.to_hex()}, {"bits", wm.size()}}.dump() << "\n";
  } else if (det->parsed()) {
    const auto cfg = det_codec.resolve();
    const Video video = load_video(det_in);
    const CodecKey key(cfg.codec, video.frame_shape());
    const auto strategy = det_codec.aggregation(cfg, video.frame_count());
    const auto result = detect(decode_video(video, key), det_codec.watermark(cfg), strategy);
    emit(detection_json(result, strategy), det_out);
  } else if (per->parsed()) {
    const auto p = Perturbation::parse(per_spec, per_seed);
    Mpeg4Options mpeg4;
    if (!per_cmd.empty()) mpeg4 = {true, per_cmd};
    save_video(apply(p, load_video(per_in), mpeg4), per_out);
  } else if (att->parsed()) {
    const auto cfg = att_codec.resolve();
    const Video video = load_video(att_in);
    const CodecKey key(cfg.codec, video.frame_shape());
    const Watermark wg = att_codec.watermark(cfg);
    const auto strategy = att_codec.aggregation(cfg, video.frame_count());
    const AttackMode mode = parse_attack_mode(att_mode);
    const AttackKind kind = parse_attack_kind(att_kind);
    json summary{{"attack", att_kind}, {"mode", att_mode}};
    std::optional<AttackTrace> trace;
    Video result = video;
    if (kind == AttackKind::pgd || kind == AttackKind::subset) {
      WhiteboxConfig wc;
      wc.mode = mode;
      wc.epsilon = att_eps;
      wc.step_size = att_step_size;
      if (kind == AttackKind::pgd) {
        wc.steps = att_steps ? att_steps : 200;
        auto out = pgd_bounded(video, key, wg, wc);
        summary["frame_ba"] = out.frame_ba;
        result = std::move(out.video);
      } else {
        if (att_mask.empty()) throw ParameterError("subset attack needs --frames");
        wc.steps = att_steps ? att_steps : 500;
        wc.frame_mask = parse_frame_mask(att_mask, video.frame_count());
        result = subset_arbitrary(video, key, wg, wc);
      }
    } else if (kind == AttackKind::square) {
      const auto oracle = make_score_oracle(key, wg, strategy);
      SquareConfig sc;
      sc.mode = mode;
      sc.epsilon = att_eps;
      sc.max_queries = att_queries;
      sc.seed = cfg.seed;
      trace = square_attack(video, oracle, sc);
    } else {
      const auto oracle = make_label_oracle(key, wg, strategy);
      const Verdict desired = mode == AttackMode::removal ? Verdict::unwatermarked : Verdict::watermarked;
      std::optional<Video> init;
      if (!att_init.empty()) {
        init = load_video(att_init);
      } else if (mode == AttackMode::removal) {
        auto g = removal_init_gaussian(video, oracle, cfg.seed);
        summary["init_sigma"] = g.sigma;
        init = std::move(g.video);
      } else {
        init = forgery_init_unrelated(video.shape(), key, wg, cfg.seed);
      }
      TriangleConfig tc;
      tc.max_queries = att_queries;
      tc.seed = cfg.seed;
      trace = triangle_attack(video, oracle, *init, desired, tc);
    }
    if (trace) {
      result = *trace->best_video;
      summary["queries"] = trace->queries_used;
    }
    const auto verdict = detect(decode_video(result, key), wg, strategy).verdict;
    const double linf = linf_distance(result, video);
    summary["final_verdict"] = verdict_name(verdict);
    summary["linf"] = linf;
    save_video(result, att_out);
    if (!att_trace.empty()) {
      const AttackTrace t = trace ? *trace : AttackTrace{};
      write_file_atomic(att_trace + ".csv", trace_csv(t));
      write_file_atomic(att_trace + ".json", trace_summary_json(t, verdict, linf));
    }
    std::cout << summary.dump(2) << "\n";
  } else if (thr->parsed()) {
    const Fraction tau = select_tau(thr_n, thr_eta);
    json j{{"n", thr_n}, {"eta", thr_eta}, {"tau", tau.to_string()}, {"fpr", fpr_of_tau(thr_n, tau)}};
    if (thr_frames) {
      j["frames"] = thr_frames;
      j["k"] = select_k(thr_frames, fpr_of_tau(thr_n, tau), thr_eta);
    }
    emit(j, thr_out);
  } else if (ben->parsed()) {
    const auto bytes = read_file(ben_config);
    auto cfg = parse_bench_config(std::string(bytes.begin(), bytes.end()));
    if (!ben_out.empty()) cfg.output_dir = ben_out;
    if (o_ben_seed->count()) cfg.seed = ben_seed;
    const auto report = run_benchmark(cfg);
    write_report(report, cfg);
    std::cout << report_csv(report);
  } else if (plt->parsed()) {
    const auto bytes = read_file(plt_in);
    write_file_atomic(plt_out, plot_svg(std::string(bytes.begin(), bytes.end()), plt_metric, plt_pert));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const vwm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
