#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support/gen.hpp"
#include "vwm/attack/blackbox.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/synth.hpp"

using namespace vwm;
using vwm::testing::Gen;

namespace {

const AggregationStrategy kBaMean{StrategyKind::ba_mean, {27, 32}, std::nullopt};

Video synth(std::uint64_t seed, std::size_t frames = 14, std::size_t side = 64) {
  SynthSpec spec;
  spec.frames = frames;
  spec.height = side;
  spec.width = side;
  return synth_video(spec, seed);
}

struct Fixture {
  Video clean;
  CodecKey key;
  Watermark wg;
  Video marked;

  explicit Fixture(std::uint64_t seed, std::size_t frames = 14, std::size_t side = 64, double strength = 0.02)
      : clean(synth(seed, frames, side)),
        key(CodecKey({}, clean.frame_shape()).with_strength(strength)),
        wg(Watermark::random(32, seed)),
        marked(embed(clean, key, wg)) {}
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST(Oracle, CountsEveryEvaluation) {
  const Fixture fx(1, 2, 16);
  const auto score = make_score_oracle(fx.key, fx.wg, kBaMean);
  EXPECT_EQ(score.queries(), 0u);
  EXPECT_DOUBLE_EQ(score(fx.marked), 1.0);
  EXPECT_DOUBLE_EQ(score(fx.marked), 1.0);
  EXPECT_EQ(score.queries(), 2u);
  const auto label = make_label_oracle(fx.key, fx.wg, kBaMean);
  EXPECT_EQ(label(fx.marked), Verdict::watermarked);
  EXPECT_EQ(label(fx.clean), Verdict::unwatermarked);
  EXPECT_EQ(label.queries(), 2u);
}

TEST(Oracle, DetectionLevelScoreCountsFrames) {
  const Fixture fx(2, 5, 16);
  const auto score = make_score_oracle(fx.key, fx.wg, {StrategyKind::detection_threshold, {27, 32}, 2});
  EXPECT_DOUBLE_EQ(score(fx.marked), 5.0);
  EXPECT_THROW(make_score_oracle(fx.key, fx.wg, {StrategyKind::detection_threshold, {27, 32}, std::nullopt}),
               ParameterError);
}

TEST(SquareSide, Schedule) {
  SquareConfig cfg;
  cfg.max_queries = 1000;
  // ⌈√(0.8·64·64)·0.1⌉ = ⌈5.72⌉ = 6
  EXPECT_EQ(square_side(cfg, 64, 64, 0), 6u);
  EXPECT_EQ(square_side(cfg, 64, 64, 99), 6u);
  EXPECT_EQ(square_side(cfg, 64, 64, 100), 3u);
  EXPECT_EQ(square_side(cfg, 64, 64, 250), 1u);
  EXPECT_EQ(square_side(cfg, 64, 64, 999), 1u);
  EXPECT_EQ(square_side(cfg, 2, 2, 0), 1u);
}

TEST(Square, SingleQueryBudget) {
  const Fixture fx(3, 3, 16);
  const auto oracle = make_score_oracle(fx.key, fx.wg, kBaMean);
  SquareConfig cfg;
  cfg.max_queries = 1;
  const auto trace = square_attack(fx.marked, oracle, cfg);
  EXPECT_EQ(oracle.queries(), 1u);
  EXPECT_EQ(trace.queries_used, 1u);
  ASSERT_EQ(trace.history.size(), 1u);
  EXPECT_LE(linf_distance(*trace.best_video, fx.marked), cfg.epsilon + 1e-12);
  EXPECT_EQ(trace.history[0].value, oracle(*trace.best_video));
}

TEST(Square, TraceInvariants) {
  for (auto mode : {AttackMode::removal, AttackMode::forgery}) {
    for (bool per_frame : {false, true}) {
      const Fixture fx(4, 4, 32);
      const auto oracle = make_score_oracle(fx.key, fx.wg, kBaMean);
      oracle(fx.clean);  // non-zero starting counter
      SquareConfig cfg;
      cfg.mode = mode;
      cfg.max_queries = 150;
      cfg.seed = 9;
      cfg.per_frame = per_frame;
      const Video& input = mode == AttackMode::removal ? fx.marked : fx.clean;
      const auto trace = square_attack(input, oracle, cfg);
      EXPECT_EQ(trace.queries_used, 150u);
      EXPECT_EQ(oracle.queries(), 151u);
      EXPECT_LE(linf_distance(*trace.best_video, input), cfg.epsilon + 1e-12);
      ASSERT_EQ(trace.history.size(), 150u);
      for (std::size_t i = 1; i < trace.history.size(); ++i) {
        EXPECT_GT(trace.history[i].query_index, trace.history[i - 1].query_index);
        if (mode == AttackMode::removal) {
          EXPECT_LE(trace.history[i].value, trace.history[i - 1].value);
        } else {
          EXPECT_GE(trace.history[i].value, trace.history[i - 1].value);
        }
      }
      EXPECT_DOUBLE_EQ(trace.history.back().value, oracle(*trace.best_video));
      const auto again = square_attack(input, make_score_oracle(fx.key, fx.wg, kBaMean), cfg);
      EXPECT_EQ(*again.best_video, *trace.best_video);
    }
  }
}

TEST(Square, PerturbationIsSharedAcrossFramesByDefault) {
  const Fixture fx(5, 3, 16);
  const Video gray = Video::filled(fx.clean.shape(), 0.5);
  // Accept every candidate so the final δ carries many squares.
  const ScoreOracle always_lower([n = 0.0](const Video&) mutable { return n -= 1.0; });
  SquareConfig cfg;
  cfg.max_queries = 50;
  const auto trace = square_attack(gray, always_lower, cfg);
  const auto f0 = trace.best_video->frame_pixels(0), f2 = trace.best_video->frame_pixels(2);
  EXPECT_TRUE(std::equal(f0.begin(), f0.end(), f2.begin()));
  for (double v : f0) EXPECT_NEAR(std::abs(v - 0.5), cfg.epsilon, 1e-12);
}

TEST(Square, OracleFailureCarriesTrace) {
  const Fixture fx(6, 2, 16);
  int calls = 0;
  const ScoreOracle flaky([&](const Video&) -> double {
    if (++calls == 5) throw std::runtime_error("backend down");
    return 1.0 - calls * 0.01;
  });
  SquareConfig cfg;
  cfg.max_queries = 20;
  try {
    square_attack(fx.marked, flaky, cfg);
    FAIL() << "expected AttackAborted";
  } catch (const AttackAborted& e) {
    EXPECT_EQ(e.trace().history.size(), 4u);
    EXPECT_EQ(e.trace().queries_used, 5u);
    EXPECT_NE(std::string(e.what()).find("backend down"), std::string::npos);
  }
}

TEST(Square, RejectsBadConfig) {
  const Fixture fx(7, 1, 16);
  const auto oracle = make_score_oracle(fx.key, fx.wg, kBaMean);
  SquareConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_THROW(square_attack(fx.marked, oracle, cfg), ParameterError);
  cfg.epsilon = 0.05;
  cfg.max_queries = 0;
  EXPECT_THROW(square_attack(fx.marked, oracle, cfg), ParameterError);
}

TEST(Square, RemovalLowersScoreOnNoiseSensitiveCodec) {
  const Fixture fx(8, 14, 64, 0.002);
  const auto oracle = make_score_oracle(fx.key, fx.wg, kBaMean);
  SquareConfig cfg;
  cfg.max_queries = 200;
  const double before = oracle(fx.marked);
  const auto trace = square_attack(fx.marked, oracle, cfg);
  EXPECT_LT(trace.history.back().value, before);
}

TEST(Triangle, InitEqualToTargetStopsImmediately) {
  const Fixture fx(9, 2, 16);
  const auto oracle = make_label_oracle(fx.key, fx.wg, kBaMean);
  TriangleConfig cfg;
  const auto trace = triangle_attack(fx.clean, oracle, fx.clean, Verdict::unwatermarked, cfg);
  EXPECT_EQ(trace.queries_used, 1u);
  EXPECT_EQ(trace.history.back().value, 0.0);
  EXPECT_EQ(*trace.best_video, fx.clean);
}

TEST(Triangle, RejectsWrongInitialization) {
  const Fixture fx(10, 2, 16);
  const auto oracle = make_label_oracle(fx.key, fx.wg, kBaMean);
  EXPECT_THROW(triangle_attack(fx.marked, oracle, fx.marked, Verdict::unwatermarked, {}), InitializationError);
  EXPECT_THROW(triangle_attack(fx.marked, oracle, synth(1, 3, 16), Verdict::unwatermarked, {}), DimensionError);
}

TEST(Triangle, AcceptedIteratesKeepLabelAndShrink) {
  const Fixture fx(11, 4, 32);
  const auto inner = make_label_oracle(fx.key, fx.wg, kBaMean);
  const auto init = removal_init_gaussian(fx.marked, inner, 3);
  std::vector<Video> unwanted;  // every queried video labelled watermarked
  const LabelOracle recording([&](const Video& v) {
    const Verdict l = inner(v);
    if (l == Verdict::watermarked) unwanted.push_back(v);
    return l;
  });
  TriangleConfig cfg;
  cfg.max_queries = 300;
  cfg.seed = 4;
  const auto trace = triangle_attack(fx.marked, recording, init.video, Verdict::unwatermarked, cfg);
  EXPECT_EQ(trace.queries_used, 300u);
  EXPECT_EQ(recording.queries(), 300u);
  for (std::size_t i = 1; i < trace.history.size(); ++i) {
    EXPECT_LE(trace.history[i].value, trace.history[i - 1].value);
    EXPECT_GE(trace.history[i].query_index, trace.history[i - 1].query_index);
  }
  EXPECT_LT(trace.history.back().value, trace.history.front().value);
  EXPECT_EQ(inner(*trace.best_video), Verdict::unwatermarked);
  for (const auto& u : unwanted) EXPECT_NE(u, *trace.best_video);
  EXPECT_DOUBLE_EQ(trace.history.back().value, linf_distance(*trace.best_video, fx.marked));
  const auto again = triangle_attack(fx.marked, inner, init.video, Verdict::unwatermarked, cfg);
  EXPECT_EQ(*again.best_video, *trace.best_video);
}

TEST(Triangle, OracleFailureCarriesTrace) {
  const Fixture fx(12, 2, 16);
  const auto inner = make_label_oracle(fx.key, fx.wg, kBaMean);
  const Video init = removal_init_gaussian(fx.marked, inner, 1).video;
  int calls = 0;
  const LabelOracle flaky([&](const Video& v) {
    if (++calls == 4) throw std::runtime_error("timeout");
    return inner(v);
  });
  try {
    triangle_attack(fx.marked, flaky, init, Verdict::unwatermarked, {});
    FAIL() << "expected AttackAborted";
  } catch (const AttackAborted& e) {
    EXPECT_EQ(e.trace().queries_used, 4u);
    EXPECT_FALSE(e.trace().history.empty());
  }
}

TEST(RemovalInit, FlipsLabelAndRespectsPrecondition) {
  const Fixture fx(13, 4, 32);
  const auto oracle = make_label_oracle(fx.key, fx.wg, kBaMean);
  EXPECT_THROW(removal_init_gaussian(fx.clean, oracle, 1), InitializationError);
  const auto init = removal_init_gaussian(fx.marked, oracle, 1);
  EXPECT_EQ(oracle(init.video), Verdict::unwatermarked);
  EXPECT_GE(init.sigma, 0.02);
  const LabelOracle stubborn([](const Video&) { return Verdict::watermarked; });
  EXPECT_THROW(removal_init_gaussian(fx.marked, stubborn, 1), InitializationError);
}

TEST(RemovalInit, WeakerEmbeddingFlipsAtLowerNoise) {
  std::vector<double> strong, weak;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Fixture a(100 + seed, 14, 64, 0.02), b(100 + seed, 14, 64, 0.002);
    strong.push_back(removal_init_gaussian(a.marked, make_label_oracle(a.key, a.wg, kBaMean), seed).sigma);
    weak.push_back(removal_init_gaussian(b.marked, make_label_oracle(b.key, b.wg, kBaMean), seed).sigma);
  }
  EXPECT_LT(median(weak), median(strong));
}

TEST(ForgeryInit, WatermarkedDeterministicAndShaped) {
  const Fixture fx(14, 14, 64);
  const auto oracle = make_label_oracle(fx.key, fx.wg, kBaMean);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Video v = forgery_init_unrelated(fx.clean.shape(), fx.key, fx.wg, s);
    EXPECT_EQ(v.shape(), fx.clean.shape());
    EXPECT_EQ(oracle(v), Verdict::watermarked);
    EXPECT_EQ(v, forgery_init_unrelated(fx.clean.shape(), fx.key, fx.wg, s));
  }
  EXPECT_NE(forgery_init_unrelated(fx.clean.shape(), fx.key, fx.wg, 1),
            forgery_init_unrelated(fx.clean.shape(), fx.key, fx.wg, 2));
}

TEST(Trace, Serialization) {
  AttackTrace t;
  t.history = {{1, 0.9}, {2, 0.5}};
  t.queries_used = 2;
  EXPECT_EQ(trace_csv(t), "query_index,value\n1,0.90000000000000002\n2,0.5\n");
  const std::string j = trace_summary_json(t, Verdict::unwatermarked, 0.05);
  EXPECT_NE(j.find("\"final_verdict\": \"unwatermarked\""), std::string::npos);
  EXPECT_NE(j.find("\"queries\": 2"), std::string::npos);
  EXPECT_DOUBLE_EQ(trace_value_at(t, 0), 0.9);
  EXPECT_DOUBLE_EQ(trace_value_at(t, 5), 0.5);
}
