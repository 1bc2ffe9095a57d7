// Copyright 2026 The procauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "procauction/scoring.hpp"

#include <gtest/gtest.h>

#include <random>
#include <span>
#include <vector>

#include "test_util.hpp"

namespace procauction {
namespace {

ScoreContext At(std::size_t round, SellerSet tentative = {}) {
  ScoreContext ctx;
  ctx.tentative = std::move(tentative);
  ctx.round = round;
  return ctx;
}

TEST(ScoreTest, CostScaledExample) {
  const AdditiveOracle f({3.0});
  const ScoringRule rule = ScoringRule::Of(RuleKind::kCostScaled);
  EXPECT_DOUBLE_EQ(score(rule, 0, At(1), 1.0, f), 1.0);
}

TEST(ScoreTest, DistortedFirstOfTwoRounds) {
  // (1 - 1/2)^(2 - 1) * 5 - 1.
  const AdditiveOracle f({5.0, 1.0});
  const ScoringRule rule = ScoringRule::Of(RuleKind::kDistortedGreedy);
  EXPECT_DOUBLE_EQ(score(rule, 0, At(1), 1.0, f), 1.5);
  EXPECT_DOUBLE_EQ(score(rule, 0, At(2), 1.0, f), 4.0);
}

TEST(ScoreTest, FormsOfEachRule) {
  const AdditiveOracle f({4.0, 0.0});
  auto s = [&](RuleKind k, SellerId i, double b) {
    return score(ScoringRule::Of(k), i, At(1), b, f);
  };
  EXPECT_DOUBLE_EQ(s(RuleKind::kGreedyMargin, 0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(s(RuleKind::kGreedyRate, 0, 1.0), 0.75);
  EXPECT_EQ(s(RuleKind::kGreedyRate, 1, 1.0), -kInfinity);
  EXPECT_DOUBLE_EQ(s(RuleKind::kRoiGreedy, 0, 1.0), 3.0);
  EXPECT_EQ(s(RuleKind::kRoiGreedy, 0, 0.0), kInfinity);
  EXPECT_DOUBLE_EQ(s(RuleKind::kRoiGreedy, 1, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(s(RuleKind::kCostScaled, 0, 1.0), 2.0);
}

TEST(ScoreTest, NoisyRuleScalesCost) {
  const AdditiveOracle f({4.0});
  ScoringRule rule = ScoringRule::Noisy(0.1);
  // n = k = 1: x = 1 + 2 * 0.1 + 0.1.
  EXPECT_DOUBLE_EQ(rule.noisy_cost_multiplier(1), 1.3);
  EXPECT_DOUBLE_EQ(score(rule, 0, At(1), 1.0, f), 4.0 - 1.3);
}

TEST(ScoreTest, StochasticUnsampledIsMinusInfinity) {
  const AdditiveOracle f(std::vector<double>(10, 1.0));
  ScoringRule rule = ScoringRule::Of(RuleKind::kStochasticDistortedGreedy);
  rule.batch_size = 1;
  const RandomSeed seed(3);
  const SellerId picked = seed.batch(1, 10, 1)[0];
  for (SellerId i = 0; i < 10; ++i) {
    const double g = score(rule, i, At(1), 0.0, f, seed);
    if (i == picked) {
      EXPECT_GT(g, 0.0);
    } else {
      EXPECT_EQ(g, -kInfinity);
    }
  }
}

TEST(ScoreTest, RejectsNegativeBid) {
  const AdditiveOracle f({1.0});
  EXPECT_THROW(score(ScoringRule::Of(RuleKind::kGreedyMargin), 0, At(1), -1.0,
                     f),
               InputError);
}

TEST(ThresholdTest, PositiveThresholdExamples) {
  const AdditiveOracle f({10.0, 0.0});
  const auto cs = ScoringRule::Of(RuleKind::kCostScaled);
  EXPECT_DOUBLE_EQ(positive_threshold(cs, 0, At(1), f), 5.0);
  EXPECT_DOUBLE_EQ(positive_threshold(cs, 1, At(1), f), 0.0);
  const AdditiveOracle g({1.0, 1.0});
  EXPECT_DOUBLE_EQ(
      positive_threshold(ScoringRule::Of(RuleKind::kDistortedGreedy), 0, At(2),
                         g),
      1.0);
}

TEST(ThresholdTest, ArgmaxThresholdExamples) {
  const AdditiveOracle f({5.0, 10.0});
  const auto margin = ScoringRule::Of(RuleKind::kGreedyMargin);
  EXPECT_DOUBLE_EQ(argmax_threshold(margin, 0, At(1), 2.0, 1, f), 3.0);
  EXPECT_EQ(argmax_threshold(margin, 0, At(1), 2.0, std::nullopt, f),
            kInfinity);
  const auto cs = ScoringRule::Of(RuleKind::kCostScaled);
  EXPECT_DOUBLE_EQ(argmax_threshold(cs, 1, At(1), 4.0, 0, f), 3.0);
}

TEST(ThresholdTest, ThresholdsSeparateScoresProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> comp(-2.0, 6.0);
  const auto inst = random_instance(8, 6);
  const CoverageOracle f(*inst.coverage);
  for (RuleKind kind : kAllRuleKinds) {
    const ScoringRule rule = kind == RuleKind::kNoisyDistortedGreedy
                                 ? ScoringRule::Noisy(0.05)
                                 : ScoringRule::Of(kind);
    for (int t = 0; t < 200; ++t) {
      const SellerSet s = testing::RandomSet(rng, 8, 0.3);
      SellerId i = rng() % 8;
      if (s.contains(i)) continue;
      const ScoreContext ctx = At(1 + rng() % 8, s);
      const RandomSeed seed(t);
      const double pos = positive_threshold(rule, i, ctx, f, seed);
      if (pos > 1e-5) {
        EXPECT_GT(score(rule, i, ctx, pos - 1e-6, f, seed), 0.0);
      }
      EXPECT_LE(score(rule, i, ctx, pos + 1e-6, f, seed), 0.0);
      const double c = comp(rng);
      const double arg = argmax_threshold(rule, i, ctx, c, 0, f, seed);
      if (arg > 1e-5 && arg < kInfinity) {
        EXPECT_GE(score(rule, i, ctx, arg - 1e-6, f, seed), c);
        EXPECT_LT(score(rule, i, ctx, arg + 1e-6, f, seed), c);
      }
    }
  }
}

TEST(OnlinePriceTest, Examples) {
  const AdditiveOracle f({10.0, 0.0, 7.0});
  EXPECT_DOUBLE_EQ(online_price(ScoringRule::Of(RuleKind::kCostScaled), 0, {}, f),
                   5.0);
  const auto margin = ScoringRule::Of(RuleKind::kGreedyMargin);
  EXPECT_DOUBLE_EQ(online_price(margin, 1, {}, f), 0.0);
  EXPECT_DOUBLE_EQ(online_price(margin, 2, {0}, f), 7.0);
  EXPECT_THROW(
      online_price(ScoringRule::Of(RuleKind::kDistortedGreedy), 0, {}, f),
      UnsupportedRuleError);
}

TEST(ScoringRuleTest, ParseAndFlags) {
  for (RuleKind kind : kAllRuleKinds) {
    EXPECT_EQ(ScoringRule::Parse(rule_name(kind)).kind, kind);
  }
  EXPECT_THROW(ScoringRule::Parse("vickrey"), InputError);
  EXPECT_TRUE(ScoringRule::Of(RuleKind::kCostScaled).diminishing_return());
  EXPECT_FALSE(ScoringRule::Of(RuleKind::kDistortedGreedy).diminishing_return());
  EXPECT_TRUE(
      ScoringRule::Of(RuleKind::kStochasticDistortedGreedy).randomized());
  ScoringRule r = ScoringRule::Of(RuleKind::kDistortedGreedy);
  r.cardinality = 0;
  EXPECT_THROW(r.rounds(3), InputError);
}

TEST(ScoringRuleTest, SampleSize) {
  ScoringRule r = ScoringRule::Of(RuleKind::kStochasticDistortedGreedy);
  r.sample_epsilon = 0.1;
  // ceil((100 / 100) * ln 10) = 3.
  EXPECT_EQ(r.sample_size(100), 3u);
  r.cardinality = 10;
  EXPECT_EQ(r.sample_size(100), 24u);
}

TEST(ValidateAssumptionsTest, BuiltInRulesPass) {
  const auto inst = random_instance(8, 2);
  const CoverageOracle f(*inst.coverage);
  for (RuleKind kind : kAllRuleKinds) {
    const ScoringRule rule = kind == RuleKind::kNoisyDistortedGreedy
                                 ? ScoringRule::Noisy(0.05)
                                 : ScoringRule::Of(kind);
    const ValidationReport r = validate_assumptions(rule, f, 300, 1);
    EXPECT_TRUE(r.ok()) << rule_name(kind) << ": "
                        << r.counterexample.value_or("");
  }
}

TEST(ValidateAssumptionsTest, FlagsIncreasingScore) {
  const auto inst = random_instance(6, 2);
  const CoverageOracle f(*inst.coverage);
  const ScoreFunction bad = [&f](SellerId i, const ScoreContext& ctx,
                                 std::span<const double> bids) {
    return f.marginal(i, ctx.tentative) + bids[i];
  };
  const ValidationReport r = validate_assumptions(bad, f, 100, 1);
  EXPECT_FALSE(r.monotone_in_own_bid);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.counterexample.has_value());
}

TEST(ValidateAssumptionsTest, FlagsDependenceOnOtherBids) {
  const auto inst = random_instance(6, 2);
  const CoverageOracle f(*inst.coverage);
  const ScoreFunction bad = [&f](SellerId i, const ScoreContext& ctx,
                                 std::span<const double> bids) {
    double others = 0.0;
    for (double b : bids) others += b;
    return f.marginal(i, ctx.tentative) - bids[i] - 1e-3 * (others - bids[i]);
  };
  EXPECT_FALSE(validate_assumptions(bad, f, 100, 1).independent_of_other_bids);
}

// G(i, S, b, j) >= G(i, T, b, k) for S subset of T and j <= k.
TEST(DiminishingReturnTest, HoldsForFlaggedRules) {
  std::mt19937_64 rng(4);
  const auto inst = random_instance(9, 12);
  const CoverageOracle f(*inst.coverage);
  for (RuleKind kind : kAllRuleKinds) {
    const ScoringRule rule = ScoringRule::Of(kind);
    if (!rule.diminishing_return()) continue;
    for (int t = 0; t < 300; ++t) {
      const SellerSet big = testing::RandomSet(rng, 9, 0.5);
      SellerSet small;
      for (SellerId id : big) {
        if (rng() & 1) small.insert(id);
      }
      const SellerId i = rng() % 9;
      if (big.contains(i)) continue;
      const std::size_t j = 1 + rng() % 9, k = j + rng() % (10 - j);
      const double b = std::uniform_real_distribution<double>(0, 20)(rng);
      EXPECT_GE(score(rule, i, At(j, small), b, f),
                score(rule, i, At(std::min<std::size_t>(k, 9), big), b, f));
    }
  }
}

TEST(DiminishingReturnTest, FailsForDistortedRule) {
  // Same set, later round: the distortion grows and so does the score.
  const AdditiveOracle f({4.0, 1.0, 1.0});
  const ScoringRule rule = ScoringRule::Of(RuleKind::kDistortedGreedy);
  EXPECT_LT(score(rule, 0, At(1), 1.0, f), score(rule, 0, At(3), 1.0, f));
}

}  // namespace
}  // namespace procauction
