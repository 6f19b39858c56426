#include <gtest/gtest.h>

#include <cmath>

#include "support/gen.hpp"
#include "vwm/attack/whitebox.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/synth.hpp"
#include "vwm/threshold/threshold.hpp"

using namespace vwm;
using vwm::testing::for_all;
using vwm::testing::Gen;

namespace {

AggregationStrategy strategy_for(StrategyKind kind, std::size_t k = 2) {
  AggregationStrategy s{kind, {27, 32}, std::nullopt};
  if (kind == StrategyKind::detection_threshold) s.k = k;
  return s;
}

Video synth(std::uint64_t seed, std::size_t frames = 14, std::size_t side = 64) {
  SynthSpec spec;
  spec.frames = frames;
  spec.height = side;
  spec.width = side;
  return synth_video(spec, seed);
}

Verdict verdict(const Video& v, const CodecKey& key, const Watermark& wg, StrategyKind kind) {
  return detect(decode_video(v, key), wg, strategy_for(kind)).verdict;
}

}  // namespace

TEST(Pgd, ZeroStepIsIdentity) {
  const Video v = synth(1, 2, 16);
  const CodecKey key({}, v.frame_shape());
  WhiteboxConfig cfg;
  cfg.steps = 1;
  cfg.step_size = 0.0;
  EXPECT_EQ(pgd_bounded(v, key, Watermark::random(32, 1), cfg).video, v);
}

TEST(Pgd, RejectsBadArguments) {
  const Video v = synth(1, 2, 16);
  const CodecKey key({}, v.frame_shape());
  const Watermark wg = Watermark::random(32, 1);
  WhiteboxConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_THROW(pgd_bounded(v, key, wg, cfg), ParameterError);
  cfg.epsilon = 0.05;
  cfg.frame_mask = Bits{1, 0};
  EXPECT_THROW(pgd_bounded(v, key, wg, cfg), ParameterError);
  cfg.frame_mask.reset();
  EXPECT_THROW(pgd_bounded(v, CodecKey({}, {16, 15, 3}), wg, cfg), DimensionError);
  EXPECT_THROW(pgd_bounded(v, key, Watermark::random(31, 1), cfg), DimensionError);
}

TEST(Pgd, LinfBoundHoldsProperty) {
  for_all(30, 50, [](Gen& g) {
    const Video v = g.video(g.index(1, 3), g.index(2, 10), g.index(2, 10), g.coin() ? 3 : 1);
    CodecParams p;
    p.seed = g.u64();
    p.bits = g.index(1, 16);
    const CodecKey key(p, v.frame_shape());
    WhiteboxConfig cfg;
    cfg.mode = g.coin() ? AttackMode::removal : AttackMode::forgery;
    cfg.epsilon = g.uniform(1e-4, 0.3);
    cfg.steps = g.index(1, 30);
    if (g.coin()) cfg.step_size = g.uniform(0.0, 0.2);
    const auto out = pgd_bounded(v, key, g.watermark(p.bits), cfg);
    EXPECT_LE(linf_distance(out.video, v), cfg.epsilon + 1e-9);
    EXPECT_EQ(out.frame_ba.size(), v.frame_count());
  });
}

TEST(Pgd, AttackLossUsuallyImproves) {
  std::size_t improved = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Gen g(5100 + t);
    const Video v = g.video(1, 8, 8, 3);
    CodecParams p;
    p.seed = g.u64();
    p.bits = g.index(4, 16);
    const CodecKey key(p, v.frame_shape());
    const Watermark wg = g.watermark(p.bits);
    WhiteboxConfig cfg;
    cfg.mode = t % 2 ? AttackMode::removal : AttackMode::forgery;
    cfg.epsilon = 0.05;
    cfg.steps = 20;
    const Video out = pgd_bounded(v, key, wg, cfg).video;
    // Removal ascends the BCE, so its attack loss is the negated BCE.
    const double sign = cfg.mode == AttackMode::removal ? -1.0 : 1.0;
    const double before = sign * attack_loss(v.frame(0), key, wg);
    const double after = sign * attack_loss(out.frame(0), key, wg);
    improved += after <= before;
  }
  EXPECT_GE(improved, 95u);
}

TEST(Pgd, AttackLossIsBinaryCrossEntropy) {
  Gen g(52);
  const Video v = g.video(1, 8, 8, 3);
  const CodecKey key({}, v.frame_shape());
  const Watermark wg = g.watermark(32);
  const auto y = decode_frame(v.frame(0), key);
  double bce = 0.0;
  for (std::size_t j = 0; j < 32; ++j) bce -= wg[j] ? std::log(y[j]) : std::log(1 - y[j]);
  EXPECT_NEAR(attack_loss(v.frame(0), key, wg), bce / 32, 1e-12);
}

TEST(Pgd, RemovalFlipsEveryStrategy) {
  const Video v = synth(3);
  const CodecKey key({}, v.frame_shape());
  const Watermark wg = Watermark::random(32, 3);
  const Video marked = embed(v, key, wg);
  WhiteboxConfig cfg;
  cfg.epsilon = 0.05;
  cfg.steps = 100;
  const Video out = pgd_bounded(marked, key, wg, cfg).video;
  for (auto kind : kAllStrategies) {
    EXPECT_EQ(verdict(marked, key, wg, kind), Verdict::watermarked);
    EXPECT_EQ(verdict(out, key, wg, kind), Verdict::unwatermarked) << strategy_name(kind);
  }
}

TEST(Pgd, ForgeryNeedsLessBudgetThanRemoval) {
  const Video v = synth(4);
  const CodecKey key({}, v.frame_shape());
  const Watermark wg = Watermark::random(32, 4);
  WhiteboxConfig cfg;
  cfg.mode = AttackMode::forgery;
  cfg.epsilon = 0.05;
  const Video forged = pgd_bounded(v, key, wg, cfg).video;
  EXPECT_EQ(verdict(forged, key, wg, StrategyKind::logit_mean), Verdict::watermarked);
  const auto s = strategy_for(StrategyKind::logit_mean);
  const auto f = min_epsilon_search(v, key, wg, AttackMode::forgery, 50, s);
  const auto r = min_epsilon_search(embed(v, key, wg), key, wg, AttackMode::removal, 50, s);
  ASSERT_TRUE(f.found);
  ASSERT_TRUE(r.found);
  EXPECT_LT(f.epsilon, r.epsilon);
}

TEST(MinEpsilon, DegenerateCodecReportsNotFound) {
  const Video v = synth(5, 2, 16);
  CodecParams p;
  p.strength = 0.3;
  p.gain = 1e6;  // saturated sigmoid: gradients vanish exactly
  const CodecKey key(p, v.frame_shape());
  const Watermark wg = Watermark::random(32, 5);
  const auto grid = epsilon_grid(1e-3, 0.05, 2.0);
  const auto r = min_epsilon_search(embed(v, key, wg), key, wg, AttackMode::removal, 20,
                                    strategy_for(StrategyKind::ba_mean), grid);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.epsilon, grid.back());
}

TEST(MinEpsilon, AgreesWithLinearScanAndIsMonotone) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Video v = synth(60 + seed, 3, 16);
    const CodecKey key({}, v.frame_shape());
    const Watermark wg = Watermark::random(32, seed);
    const Video marked = embed(v, key, wg);
    const auto s = strategy_for(StrategyKind::ba_mean);
    const auto grid = epsilon_grid(1e-3, 0.1, 1.5);
    const auto r = min_epsilon_search(marked, key, wg, AttackMode::removal, 30, s, grid);
    ASSERT_TRUE(r.found);
    std::vector<bool> success;
    for (double e : grid) {
      WhiteboxConfig cfg;
      cfg.epsilon = e;
      cfg.steps = 30;
      success.push_back(verdict(pgd_bounded(marked, key, wg, cfg).video, key, wg, StrategyKind::ba_mean) ==
                        Verdict::unwatermarked);
    }
    const auto first = std::find(success.begin(), success.end(), true) - success.begin();
    const auto found = std::find(grid.begin(), grid.end(), r.epsilon) - grid.begin();
    EXPECT_LE(std::abs(first - found), 1);
    for (std::size_t i = static_cast<std::size_t>(found); i < grid.size(); ++i) EXPECT_TRUE(success[i]) << i;
  }
}

TEST(EpsilonGrid, Geometric) {
  const auto g = epsilon_grid(0.01, 0.08, 2.0);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g[3], 0.08);
  EXPECT_THROW(epsilon_grid(0.0, 1.0, 2.0), ParameterError);
  EXPECT_THROW(epsilon_grid(0.1, 1.0, 1.0), ParameterError);
}

TEST(FrameMask, Parsing) {
  EXPECT_EQ(parse_frame_mask("0-2,7", 8), (Bits{1, 1, 1, 0, 0, 0, 0, 1}));
  EXPECT_EQ(parse_frame_mask("3", 4), (Bits{0, 0, 0, 1}));
  EXPECT_THROW(parse_frame_mask("8", 8), ParameterError);
  EXPECT_THROW(parse_frame_mask("2-1", 8), ParameterError);
  EXPECT_THROW(parse_frame_mask("a", 8), ParameterError);
  EXPECT_THROW(parse_frame_mask("1,,2", 8), ParameterError);
}

class Subset : public ::testing::Test {
 protected:
  Video clean = synth(7);
  CodecKey key = CodecKey({}, clean.frame_shape()).with_activation(Activation::identity);
  Watermark wg = Watermark::random(32, 7);
  Video marked = embed(clean, key, wg);
};

TEST_F(Subset, ValidatesMaskAndCodec) {
  WhiteboxConfig cfg;
  EXPECT_THROW(subset_arbitrary(marked, key, wg, cfg), ParameterError);
  cfg.frame_mask = Bits(13, 1);
  EXPECT_THROW(subset_arbitrary(marked, key, wg, cfg), DimensionError);
  cfg.frame_mask = Bits(14, 0);
  EXPECT_THROW(subset_arbitrary(marked, key, wg, cfg), ParameterError);
  cfg.frame_mask = Bits(14, 1);
  EXPECT_THROW(subset_arbitrary(marked, key.with_activation(Activation::sigmoid), wg, cfg), ParameterError);
}

TEST_F(Subset, ZeroStepsIsIdentity) {
  WhiteboxConfig cfg;
  cfg.steps = 0;
  cfg.frame_mask = parse_frame_mask("0-4", 14);
  EXPECT_EQ(subset_arbitrary(marked, key, wg, cfg), marked);
}

TEST_F(Subset, UnmaskedFramesAreUntouched) {
  for_all(5, 53, [&](Gen& g) {
    WhiteboxConfig cfg;
    cfg.steps = 50;
    cfg.mode = g.coin() ? AttackMode::removal : AttackMode::forgery;
    Bits mask = g.bits(14);
    mask[g.index(0, 13)] = 1;
    cfg.frame_mask = mask;
    const Video out = subset_arbitrary(marked, key, wg, cfg);
    for (std::size_t f = 0; f < 14; ++f) {
      if (!mask[f]) {
        const auto a = out.frame_pixels(f), b = marked.frame_pixels(f);
        EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << f;
      }
    }
  });
}

TEST_F(Subset, MinorityRemovalBreaksLogitMeanOnly) {
  WhiteboxConfig cfg;
  cfg.frame_mask = parse_frame_mask("0-2", 14);  // 3 of 14 frames
  const Video out = subset_arbitrary(marked, key, wg, cfg);
  EXPECT_EQ(verdict(out, key, wg, StrategyKind::logit_mean), Verdict::unwatermarked);
  for (auto kind : {StrategyKind::ba_median, StrategyKind::bit_median, StrategyKind::detection_median}) {
    EXPECT_EQ(verdict(out, key, wg, kind), Verdict::watermarked) << strategy_name(kind);
  }
}

TEST_F(Subset, ForgeryWithKFramesBeatsDetectionThreshold) {
  const std::size_t k = select_k(14, fpr_of_tau(32, {27, 32}));
  const auto s = strategy_for(StrategyKind::detection_threshold, k);
  EXPECT_EQ(detect(decode_video(clean, key), wg, s).verdict, Verdict::unwatermarked);
  WhiteboxConfig cfg;
  cfg.mode = AttackMode::forgery;
  Bits mask(14, 0);
  for (std::size_t i = 0; i < k; ++i) mask[2 * i] = 1;
  cfg.frame_mask = mask;
  EXPECT_EQ(detect(decode_video(subset_arbitrary(clean, key, wg, cfg), key), wg, s).verdict, Verdict::watermarked);
  mask[0] = 0;
  cfg.frame_mask = mask;
  EXPECT_EQ(detect(decode_video(subset_arbitrary(clean, key, wg, cfg), key), wg, s).verdict,
            Verdict::unwatermarked);
}
