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

#include "procauction/selection.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.hpp"

namespace procauction {
namespace {

TEST(RunMetaTest, CoverageExampleWithMarginRule) {
  const CoverageOracle f(testing::TwoSellerCoverage());
  const std::vector<double> bids = {1.0, 1.0};
  const ScoringRule rule = ScoringRule::Of(RuleKind::kGreedyMargin);
  const SelectionTrace t = run_meta(rule, f, bids);
  EXPECT_EQ(t.winners(), SellerSet({1}));
  ASSERT_EQ(t.rounds(), 2u);
  EXPECT_EQ(t.tentative_sets[0], SellerSet());
  EXPECT_EQ(t.tentative_sets[1], SellerSet({1}));
  EXPECT_EQ(t.chosen_at[1], std::optional<std::size_t>(1));
  EXPECT_FALSE(t.chosen_at[0].has_value());
  EXPECT_DOUBLE_EQ(*t.scores_at_admission[1], 4.0);
  // Round 2: A scores f(A | {B}) - 1 = 0, which does not admit.
  ScoreContext ctx;
  ctx.tentative = {1};
  ctx.round = 2;
  EXPECT_DOUBLE_EQ(score(rule, 0, ctx, 1.0, f), 0.0);
}

TEST(RunMetaTest, LargeBidsSelectNobody) {
  const CoverageOracle f(testing::TwoSellerCoverage());
  const std::vector<double> bids = {100.0, 100.0};
  for (RuleKind kind : kAllRuleKinds) {
    EXPECT_TRUE(run_meta(ScoringRule::Of(kind), f, bids).winners().empty());
  }
}

TEST(RunMetaTest, SingleSeller) {
  const AdditiveOracle f({10.0});
  EXPECT_EQ(run_meta(ScoringRule::Of(RuleKind::kCostScaled), f,
                     std::vector<double>{4.0})
                .winners(),
            SellerSet({0}));
  EXPECT_TRUE(run_meta(ScoringRule::Of(RuleKind::kCostScaled), f,
                       std::vector<double>{5.0})
                  .winners()
                  .empty());
}

TEST(RunMetaTest, RejectsBadBids) {
  const AdditiveOracle f({1.0, 2.0});
  const auto rule = ScoringRule::Of(RuleKind::kGreedyMargin);
  EXPECT_THROW(run_meta(rule, f, std::vector<double>{1.0}), InputError);
  EXPECT_THROW(run_meta(rule, f, std::vector<double>{1.0, -1.0}), InputError);
}

TEST(RunMetaTest, AdmittedSellersBeatTheirBids) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = random_instance(10, seed);
    const CoverageOracle f(*inst.coverage);
    for (RuleKind kind : {RuleKind::kGreedyMargin, RuleKind::kGreedyRate,
                          RuleKind::kRoiGreedy, RuleKind::kCostScaled,
                          RuleKind::kDistortedGreedy}) {
      const SelectionTrace t = run_meta(ScoringRule::Of(kind), f, inst.costs);
      for (SellerId i : t.winners()) {
        const std::size_t k = *t.chosen_at[i];
        EXPECT_GT(*t.scores_at_admission[i], 0.0);
        EXPECT_GE(f.marginal(i, t.tentative_sets[k - 1]), inst.costs[i]);
        EXPECT_TRUE(t.tentative_sets[k - 1].is_subset_of(t.tentative_sets[k]));
      }
    }
  }
}

TEST(RunMetaLazyTest, MatchesNaive) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto inst = random_instance(1 + seed % 50, seed);
    const CoverageOracle f(*inst.coverage);
    for (RuleKind kind : {RuleKind::kGreedyMargin, RuleKind::kGreedyRate,
                          RuleKind::kRoiGreedy, RuleKind::kCostScaled}) {
      const ScoringRule rule = ScoringRule::Of(kind);
      const SelectionTrace naive = run_meta(rule, f, inst.costs);
      const SelectionTrace lazy = run_meta_lazy(rule, f, inst.costs);
      ASSERT_EQ(naive.winners(), lazy.winners())
          << rule_name(kind) << " seed " << seed;
      EXPECT_EQ(naive.chosen_at, lazy.chosen_at);
    }
  }
}

TEST(RunMetaLazyTest, RejectsRulesWithoutDiminishingReturns) {
  const AdditiveOracle f({1.0});
  EXPECT_THROW(run_meta_lazy(ScoringRule::Of(RuleKind::kDistortedGreedy), f,
                             std::vector<double>{0.5}),
               UnsupportedRuleError);
}

TEST(RunMetaPruningTest, MatchesUnprunedRun) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = random_instance(2 + seed % 30, seed);
    const CoverageOracle f(*inst.coverage);
    for (RuleKind kind : kAllRuleKinds) {
      if (kind == RuleKind::kNoisyDistortedGreedy) continue;
      const ScoringRule rule = ScoringRule::Of(kind);
      const RandomSeed rs(seed);
      const SelectionTrace plain = run_meta(rule, f, inst.costs, rs, false);
      const SelectionTrace pruned = run_meta(rule, f, inst.costs, rs, true);
      EXPECT_EQ(plain.winners(), pruned.winners())
          << rule_name(kind) << " seed " << seed;
      EXPECT_EQ(plain.chosen_at, pruned.chosen_at);
    }
  }
}

}  // namespace
}  // namespace procauction
