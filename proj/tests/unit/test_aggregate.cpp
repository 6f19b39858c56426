#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/gen.hpp"
#include "vwm/aggregate/aggregate.hpp"
#include "vwm/core/codec.hpp"
#include "vwm/core/error.hpp"
#include "vwm/core/synth.hpp"

using namespace vwm;
using vwm::testing::for_all;
using vwm::testing::Gen;

namespace {

AggregationStrategy strategy_for(StrategyKind kind, std::size_t k = 1) {
  AggregationStrategy s{kind, {27, 32}, std::nullopt};
  if (kind == StrategyKind::detection_threshold) s.k = k;
  return s;
}

// Zooming grid search: the minimum over a 101×101 grid, recentred and shrunk
// until the cell size is far below the tolerance of interest.
double grid_search_minimum(const std::vector<std::vector<double>>& pts) {
  double cx = 0, cy = 0, half = 0;
  for (const auto& p : pts) {
    cx += p[0] / pts.size();
    cy += p[1] / pts.size();
  }
  for (const auto& p : pts) half = std::max({half, std::abs(p[0] - cx), std::abs(p[1] - cy)});
  half = std::max(half, 1e-3);
  double best = std::numeric_limits<double>::infinity();
  while (half > 1e-9) {
    double bx = cx, by = cy;
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        const std::vector<double> z{cx - half + 2 * half * i / 100.0, cy - half + 2 * half * j / 100.0};
        double s = 0.0;
        for (const auto& p : pts) s += std::hypot(z[0] - p[0], z[1] - p[1]);
        if (s < best) {
          best = s;
          bx = z[0];
          by = z[1];
        }
      }
    }
    cx = bx;
    cy = by;
    half /= 10.0;
  }
  return best;
}

}  // namespace

TEST(Strategy, NamesRoundTrip) {
  for (auto k : kAllStrategies) EXPECT_EQ(parse_strategy(strategy_name(k)), k);
  EXPECT_EQ(strategy_name(StrategyKind::logit_mean), "logit-mean");
  EXPECT_THROW(parse_strategy("logit_mean"), ParameterError);
}

TEST(Strategy, Validation) {
  EXPECT_THROW((AggregationStrategy{StrategyKind::ba_mean, {1, 2}, std::nullopt}.validate()), ParameterError);
  EXPECT_THROW((AggregationStrategy{StrategyKind::ba_mean, {33, 32}, std::nullopt}.validate()), ParameterError);
  EXPECT_THROW((AggregationStrategy{StrategyKind::detection_threshold, {27, 32}, std::nullopt}.validate()),
               ParameterError);
  EXPECT_THROW((AggregationStrategy{StrategyKind::ba_mean, {27, 32}, 2}.validate()), ParameterError);
  EXPECT_THROW((AggregationStrategy{StrategyKind::detection_threshold, {27, 32}, 0}.validate()), ParameterError);
  EXPECT_NO_THROW((AggregationStrategy{StrategyKind::detection_threshold, {1, 1}, 3}.validate()));
}

TEST(LogitMean, Examples) {
  const auto same = LogitMatrix::from_rows({{0.2, 0.9}, {0.2, 0.9}, {0.2, 0.9}});
  const auto m = logit_mean(same);
  EXPECT_NEAR(m[0], 0.2, 1e-15);
  EXPECT_NEAR(m[1], 0.9, 1e-15);
  const auto cross = LogitMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(logit_mean(cross), (std::vector<double>{0.5, 0.5}));
}

TEST(LogitMean, MatchesDirectSummation) {
  for_all(50, 20, [](Gen& g) {
    const auto L = g.logits(7, 5);
    const auto m = logit_mean(L);
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < 7; ++i) s += L(i, j);
      EXPECT_NEAR(m[j], s / 7.0, 1e-15);
    }
  });
}

TEST(GeometricMedian, IdenticalAndSinglePoints) {
  const std::vector<std::vector<double>> same(5, {0.3, 0.7, 0.1});
  EXPECT_EQ(geometric_median(same).point, same[0]);
  const std::vector<std::vector<double>> one{{0.123456789, 0.9}};
  EXPECT_EQ(geometric_median(one).point, one[0]);
}

TEST(GeometricMedian, TwoPointsAttainSegmentLength) {
  for_all(50, 21, [](Gen& g) {
    const std::size_t n = g.index(1, 8);
    const std::vector<std::vector<double>> pts{g.vec(n), g.vec(n)};
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += (pts[0][j] - pts[1][j]) * (pts[0][j] - pts[1][j]);
    EXPECT_NEAR(geometric_median(pts).objective, std::sqrt(d), 1e-9);
  });
}

TEST(GeometricMedian, UnitSquareCorners) {
  const std::vector<std::vector<double>> pts{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const auto r = geometric_median(pts);
  EXPECT_NEAR(r.objective, 2 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(r.objective, grid_search_minimum(pts), 1e-6);
}

TEST(GeometricMedian, MatchesGridSearchIn2D) {
  for_all(40, 22, [](Gen& g) {
    std::vector<std::vector<double>> pts;
    const std::size_t F = g.index(3, 9);
    for (std::size_t i = 0; i < F; ++i) pts.push_back(g.vec(2));
    if (g.coin(0.3)) pts.push_back(pts[0]);  // repeated points
    const auto r = geometric_median(pts);
    EXPECT_NEAR(r.objective, geometric_median_objective(pts, r.point), 1e-12);
    EXPECT_NEAR(r.objective, grid_search_minimum(pts), 1e-6);
  });
}

TEST(GeometricMedian, NeverWorseThanMean) {
  for_all(50, 23, [](Gen& g) {
    const std::size_t F = g.index(1, 14), n = g.index(1, 32);
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < F; ++i) pts.push_back(g.vec(n));
    std::vector<double> mean(n, 0.0);
    for (const auto& p : pts)
      for (std::size_t j = 0; j < n; ++j) mean[j] += p[j] / F;
    EXPECT_LE(geometric_median(pts).objective, geometric_median_objective(pts, mean) + 1e-9);
  });
}

TEST(GeometricMedian, RejectsBadInput) {
  EXPECT_THROW(geometric_median(std::vector<std::vector<double>>{}), DimensionError);
  EXPECT_THROW(geometric_median(std::vector<std::vector<double>>{{0.1}, {std::nan("")}}), ParameterError);
  EXPECT_THROW(geometric_median(std::vector<std::vector<double>>{{0.1}, {0.1, 0.2}}), DimensionError);
  EXPECT_THROW(geometric_median(std::vector<std::vector<double>>{{0.1}}, {0.0, 10, 1e-12}), ParameterError);
}

TEST(BitMedian, Examples) {
  const auto three = LogitMatrix::from_rows({{0.9}, {0.8}, {0.1}});
  EXPECT_EQ(bit_median(three), (Bits{1}));
  const auto tie = LogitMatrix::from_rows({{0.9}, {0.1}});
  EXPECT_EQ(bit_median(tie), (Bits{1}));
}

TEST(BitMedian, MatchesTally) {
  for_all(100, 24, [](Gen& g) {
    const auto L = g.logits(9, 8);
    const auto b = bit_median(L);
    for (std::size_t j = 0; j < 8; ++j) {
      int ones = 0;
      for (std::size_t i = 0; i < 9; ++i) ones += L(i, j) >= 0.5;
      EXPECT_EQ(b[j], ones >= 5 ? 1 : 0);
    }
  });
}

TEST(BaStatistics, Examples) {
  const Watermark wg(Bits{1, 0});
  const auto two = LogitMatrix::from_rows({{0.9, 0.1}, {0.9, 0.9}});  // BAs 1.0, 0.5
  EXPECT_DOUBLE_EQ(ba_mean(two, wg), 0.75);
  EXPECT_DOUBLE_EQ(ba_median(two, wg), 0.75);
  const auto three = LogitMatrix::from_rows({{0.9, 0.1}, {0.9, 0.1}, {0.1, 0.9}});  // 1, 1, 0
  EXPECT_DOUBLE_EQ(ba_mean(three, wg), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(ba_median(three, wg), 1.0);
  EXPECT_THROW(ba_mean(three, Watermark(Bits{1})), DimensionError);
}

TEST(FrameDecisions, Examples) {
  Gen g(25);
  const Bits wg = g.bits(32);
  Bits off_by_six = wg;
  for (std::size_t j = 0; j < 6; ++j) off_by_six[j] ^= 1;  // 26/32 matches
  const auto L = g.logits_from_bits({wg, off_by_six, wg});
  EXPECT_EQ(frame_decisions(L, Watermark(wg), {27, 32}), (Bits{1, 0, 1}));
}

TEST(Detect, CleanWatermarkedVideoIsDetectedByEveryStrategy) {
  SynthSpec spec;
  const Video v = synth_video(spec, 3);
  const CodecKey key({}, v.frame_shape());
  const Watermark wg = Watermark::random(32, 4);
  const auto L = decode_video(embed(v, key, wg), key);
  for (auto kind : kAllStrategies) {
    EXPECT_EQ(detect(L, wg, strategy_for(kind, 2)).verdict, Verdict::watermarked) << strategy_name(kind);
  }
}

TEST(Detect, BelowRoundingLogitsAreUnwatermarked) {
  for_all(100, 26, [](Gen& g) {
    const Watermark wg = g.watermark(32);
    const LogitMatrix L(5, 32, std::vector<double>(160, 0.5 - 1e-3));
    for (auto kind : kAllStrategies) EXPECT_EQ(detect(L, wg, strategy_for(kind)).verdict, Verdict::unwatermarked);
  });
}

TEST(Detect, ThresholdVersusMajority) {
  Gen g(27);
  const Bits wg = g.bits(32);
  std::vector<Bits> rows(15);
  rows[0] = wg;
  for (std::size_t i = 1; i < 15; ++i) {
    rows[i] = wg;
    for (auto& b : rows[i]) b ^= 1;
  }
  const auto L = g.logits_from_bits(rows);
  const auto th = detect(L, Watermark(wg), strategy_for(StrategyKind::detection_threshold, 1));
  EXPECT_EQ(th.verdict, Verdict::watermarked);
  EXPECT_EQ(th.statistic, 1.0);
  ASSERT_TRUE(th.frame_decisions.has_value());
  EXPECT_EQ(detect(L, Watermark(wg), strategy_for(StrategyKind::detection_median)).verdict, Verdict::unwatermarked);
  EXPECT_THROW(detect(L, Watermark(wg), strategy_for(StrategyKind::detection_threshold, 16)), ParameterError);
}

TEST(Detect, MajorityTieCountsAsWatermarked) {
  Gen g(28);
  const Bits wg = g.bits(8);
  Bits wrong = wg;
  for (auto& b : wrong) b ^= 1;
  const auto L = g.logits_from_bits({wg, wrong});
  AggregationStrategy s{StrategyKind::detection_median, {7, 8}, std::nullopt};
  EXPECT_EQ(detect(L, Watermark(wg), s).verdict, Verdict::watermarked);
}

TEST(Detect, StatisticCarriesTestedScalar) {
  Gen g(29);
  const auto L = g.logits(6, 32);
  const Watermark wg = g.watermark(32);
  EXPECT_DOUBLE_EQ(detect(L, wg, strategy_for(StrategyKind::ba_mean)).statistic, ba_mean(L, wg));
  EXPECT_DOUBLE_EQ(detect(L, wg, strategy_for(StrategyKind::bit_median)).statistic,
                   bitwise_accuracy(bit_median(L), wg.bits()));
  EXPECT_DOUBLE_EQ(detect(L, wg, strategy_for(StrategyKind::logit_mean)).statistic,
                   bitwise_accuracy(round_logits(logit_mean(L)), wg.bits()));
}

TEST(DetectProperty, SingleFrameStrategiesAgree) {
  for_all(200, 30, [](Gen& g) {
    const std::size_t n = g.index(1, 32);
    const Watermark wg = g.watermark(n);
    // Mix random rows and rows close to wg so both verdicts occur.
    Bits bits = wg.bits();
    const std::size_t flips = g.index(0, n);
    for (std::size_t j = 0; j < flips; ++j) bits[g.index(0, n - 1)] ^= 1;
    const auto L = g.logits_from_bits({bits});
    const Verdict first = detect(L, wg, strategy_for(kAllStrategies[0])).verdict;
    for (auto kind : kAllStrategies) EXPECT_EQ(detect(L, wg, strategy_for(kind)).verdict, first);
  });
}

TEST(DetectProperty, PermutationInvariance) {
  for_all(100, 31, [](Gen& g) {
    const std::size_t F = g.index(1, 10), n = g.index(4, 32);
    const Watermark wg = g.watermark(n);
    std::vector<Bits> rows;
    for (std::size_t i = 0; i < F; ++i) rows.push_back(g.coin() ? wg.bits() : g.bits(n));
    const auto L = g.logits_from_bits(rows);
    std::vector<std::size_t> order(F);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = F; i > 1; --i) std::swap(order[i - 1], order[g.index(0, i - 1)]);
    std::vector<std::vector<double>> shuffled;
    for (auto i : order) shuffled.emplace_back(L.row(i).begin(), L.row(i).end());
    const auto P = LogitMatrix::from_rows(shuffled);
    for (auto kind : kAllStrategies) {
      EXPECT_EQ(detect(L, wg, strategy_for(kind)).verdict, detect(P, wg, strategy_for(kind)).verdict)
          << strategy_name(kind);
    }
  });
}

TEST(DetectProperty, MedianStrategiesResistMinorityCorruption) {
  for_all(100, 32, [](Gen& g) {
    const std::size_t F = g.index(1, 15), n = g.index(1, 32);
    const Watermark wg = g.watermark(n);
    const std::size_t bad = g.index(0, (F + 1) / 2 - 1);  // strictly fewer than ⌈F/2⌉
    std::vector<Bits> rows;
    for (std::size_t i = 0; i < F; ++i) rows.push_back(i < bad ? g.bits(n) : wg.bits());
    const auto L = g.logits_from_bits(rows);
    for (auto kind : {StrategyKind::ba_median, StrategyKind::bit_median, StrategyKind::detection_median}) {
      EXPECT_EQ(detect(L, wg, strategy_for(kind)).verdict, Verdict::watermarked) << strategy_name(kind);
    }
  });
}

TEST(DetectProperty, ThresholdMonotoneInK) {
  for_all(100, 33, [](Gen& g) {
    const std::size_t F = g.index(1, 14);
    const Watermark wg = g.watermark(32);
    std::vector<Bits> rows;
    for (std::size_t i = 0; i < F; ++i) rows.push_back(g.coin() ? wg.bits() : g.bits(32));
    const auto L = g.logits_from_bits(rows);
    bool seen_watermarked = false;
    for (std::size_t k = F; k >= 1; --k) {
      const bool w = detect(L, wg, strategy_for(StrategyKind::detection_threshold, k)).verdict == Verdict::watermarked;
      if (seen_watermarked) {
        EXPECT_TRUE(w) << "k=" << k;
      }
      seen_watermarked = seen_watermarked || w;
    }
  });
}

TEST(DetectProperty, DecisionsMatchBruteForceTallies) {
  for_all(200, 34, [](Gen& g) {
    const std::size_t F = g.index(1, 14), n = g.index(1, 32);
    const auto L = g.logits(F, n);
    const Watermark wg = g.watermark(n);
    const Fraction tau{27, 32};
    std::size_t detected = 0;
    const auto d = frame_decisions(L, wg, tau);
    for (std::size_t i = 0; i < F; ++i) {
      std::size_t m = 0;
      for (std::size_t j = 0; j < n; ++j) m += (L(i, j) >= 0.5) == (wg[j] == 1);
      const bool hit = 32 * m >= 27 * n;
      EXPECT_EQ(d[i], hit ? 1 : 0);
      detected += hit;
    }
    EXPECT_EQ(detect(L, wg, strategy_for(StrategyKind::detection_median)).verdict,
              2 * detected >= F ? Verdict::watermarked : Verdict::unwatermarked);
  });
}
