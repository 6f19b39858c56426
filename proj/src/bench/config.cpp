#include <set>
#include <string>

#include "json.hpp"
#include "vwm/bench/bench.hpp"
#include "vwm/core/error.hpp"

namespace vwm {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ParameterError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::string_view activation_name(Activation a) { return a == Activation::sigmoid ? "sigmoid" : "identity"; }
std::string_view layout_name(CarrierLayout l) { return l == CarrierLayout::highpass ? "highpass" : "white"; }

}  // namespace

std::string_view attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::pgd: return "pgd";
    case AttackKind::subset: return "subset";
    case AttackKind::square: return "square";
    case AttackKind::triangle: return "triangle";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view name) {
  for (auto k : {AttackKind::pgd, AttackKind::subset, AttackKind::square, AttackKind::triangle}) {
    if (attack_kind_name(k) == name) return k;
  }
  throw ParameterError("unknown attack '" + std::string(name) + "' (pgd, subset, square, triangle)");
}

void BenchConfig::validate() const {
  if (codec.bits == 0) throw ParameterError("watermark length must be >= 1");
  if (!(codec.strength >= 0.0) || !(codec.gain > 0.0)) throw ParameterError("invalid codec strength or gain");
  if (strategies.empty()) throw ParameterError("strategy list is empty");
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0, 1)");
  if (tau) AggregationStrategy{StrategyKind::ba_mean, *tau, std::nullopt}.validate();
  if (k && *k == 0) throw ParameterError("k must be >= 1");
  for (const auto& sweep : perturbations) {
    if (sweep.parameters.empty()) {
      throw ParameterError("empty parameter grid for " + std::string(perturbation_name(sweep.kind)));
    }
    for (double p : sweep.parameters) Perturbation{sweep.kind, p, 0}.validate();
  }
  for (const auto& a : attacks) {
    if (!(a.epsilon > 0.0)) throw ParameterError("attack epsilon must be > 0");
    if (a.queries == 0) throw ParameterError("attack budget must be >= 1");
    if (a.videos == 0 || a.videos > videos.count) throw ParameterError("attack video count out of range");
    if (a.kind == AttackKind::subset) throw ParameterError("subset attacks are not part of the benchmark sweep");
  }
  if (videos.count == 0) throw ParameterError("video count must be >= 1");
  validate_shape(VideoShape{videos.frames, FrameShape{videos.height, videos.width, videos.channels}});
  if (!(videos.fast_fraction >= 0.0 && videos.fast_fraction <= 1.0)) {
    throw ParameterError("fast_fraction must lie in [0, 1]");
  }
}

BenchConfig parse_bench_config(std::string_view json_text) {
  BenchConfig cfg;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ParameterError("bench config must be a JSON object");
    reject_unknown(j,
                   {"codec", "n", "strategies", "tau", "eta", "k", "perturbations", "attacks", "videos", "seed",
                    "per_video_keys", "output_dir", "mpeg4"},
                   "config");
    if (j.contains("codec")) {
      const auto& c = j.at("codec");
      reject_unknown(c, {"seed", "bits", "strength", "gain", "activation", "layout"}, "codec");
      read(c, "seed", cfg.codec.seed);
      read(c, "bits", cfg.codec.bits);
      read(c, "strength", cfg.codec.strength);
      read(c, "gain", cfg.codec.gain);
      if (c.contains("activation")) {
        const auto a = c.at("activation").get<std::string>();
        if (a == "sigmoid") cfg.codec.activation = Activation::sigmoid;
        else if (a == "identity") cfg.codec.activation = Activation::identity;
        else throw ParameterError("activation must be sigmoid or identity");
      }
      if (c.contains("layout")) {
        const auto l = c.at("layout").get<std::string>();
        if (l == "highpass") cfg.codec.layout = CarrierLayout::highpass;
        else if (l == "white") cfg.codec.layout = CarrierLayout::white;
        else throw ParameterError("layout must be highpass or white");
      }
    }
    read(j, "n", cfg.codec.bits);
    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const auto& s : j.at("strategies")) cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    if (j.contains("tau") && !j.at("tau").is_null()) {
      const auto& t = j.at("tau");
      cfg.tau = t.is_string() ? Fraction::parse(t.get<std::string>()) : Fraction::parse(t.dump());
    }
    read(j, "eta", cfg.eta);
    if (j.contains("k") && !j.at("k").is_null()) cfg.k = j.at("k").get<std::size_t>();
    if (j.contains("perturbations")) {
      for (const auto& p : j.at("perturbations")) {
        reject_unknown(p, {"kind", "parameters"}, "perturbation");
        PerturbationSweep sweep;
        sweep.kind = parse_perturbation_kind(p.at("kind").get<std::string>());
        sweep.parameters = p.at("parameters").get<std::vector<double>>();
        cfg.perturbations.push_back(std::move(sweep));
      }
    }
    if (j.contains("attacks")) {
      for (const auto& a : j.at("attacks")) {
        reject_unknown(a, {"kind", "mode", "epsilon", "queries", "videos", "strategy"}, "attack");
        AttackSpec spec;
        spec.kind = parse_attack_kind(a.at("kind").get<std::string>());
        if (a.contains("mode")) spec.mode = parse_attack_mode(a.at("mode").get<std::string>());
        read(a, "epsilon", spec.epsilon);
        read(a, "queries", spec.queries);
        read(a, "videos", spec.videos);
        if (a.contains("strategy")) spec.strategy = parse_strategy(a.at("strategy").get<std::string>());
        cfg.attacks.push_back(spec);
      }
    }
    if (j.contains("videos")) {
      const auto& v = j.at("videos");
      reject_unknown(v, {"count", "frames", "height", "width", "channels", "fast_fraction"}, "videos");
      read(v, "count", cfg.videos.count);
      read(v, "frames", cfg.videos.frames);
      read(v, "height", cfg.videos.height);
      read(v, "width", cfg.videos.width);
      read(v, "channels", cfg.videos.channels);
      read(v, "fast_fraction", cfg.videos.fast_fraction);
    }
    read(j, "seed", cfg.seed);
    read(j, "per_video_keys", cfg.per_video_keys);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("mpeg4")) {
      const auto& m = j.at("mpeg4");
      reject_unknown(m, {"enabled", "command"}, "mpeg4");
      read(m, "enabled", cfg.mpeg4.enabled);
      read(m, "command", cfg.mpeg4.command_template);
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid bench config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string bench_config_json(const BenchConfig& cfg) {
  json j;
  j["codec"] = {{"seed", cfg.codec.seed},
                {"bits", cfg.codec.bits},
                {"strength", cfg.codec.strength},
                {"gain", cfg.codec.gain},
                {"activation", activation_name(cfg.codec.activation)},
                {"layout", layout_name(cfg.codec.layout)}};
  json strategies = json::array();
  for (auto s : cfg.strategies) strategies.push_back(strategy_name(s));
  j["strategies"] = strategies;
  j["tau"] = cfg.tau ? json(cfg.tau->to_string()) : json(nullptr);
  j["eta"] = cfg.eta;
  j["k"] = cfg.k ? json(*cfg.k) : json(nullptr);
  json perturbations = json::array();
  for (const auto& p : cfg.perturbations) {
    perturbations.push_back({{"kind", perturbation_name(p.kind)}, {"parameters", p.parameters}});
  }
  j["perturbations"] = perturbations;
  json attacks = json::array();
  for (const auto& a : cfg.attacks) {
    attacks.push_back({{"kind", attack_kind_name(a.kind)},
                       {"mode", attack_mode_name(a.mode)},
                       {"epsilon", a.epsilon},
                       {"queries", a.queries},
                       {"videos", a.videos},
                       {"strategy", strategy_name(a.strategy)}});
  }
  j["attacks"] = attacks;
  j["videos"] = {{"count", cfg.videos.count},   {"frames", cfg.videos.frames},
                 {"height", cfg.videos.height}, {"width", cfg.videos.width},
                 {"channels", cfg.videos.channels}, {"fast_fraction", cfg.videos.fast_fraction}};
  j["seed"] = cfg.seed;
  j["per_video_keys"] = cfg.per_video_keys;
  j["output_dir"] = cfg.output_dir.string();
  j["mpeg4"] = {{"enabled", cfg.mpeg4.enabled}, {"command", cfg.mpeg4.command_template}};
  return j.dump(2);
}

}  // namespace vwm
