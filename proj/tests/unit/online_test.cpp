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

#include "procauction/online.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.hpp"

namespace procauction {
namespace {

const ScoringRule kCostScaled = ScoringRule::Of(RuleKind::kCostScaled);

TEST(OnlineTest, AdditiveCostScaledExample) {
  const AdditiveOracle f({10.0, 4.0});
  const std::vector<double> costs = {3.0, 3.0};
  EXPECT_EQ(run_online_meta(kCostScaled, f, costs, ArrivalOrder::Identity(2)),
            SellerSet({0}));
  const auto out =
      run_posted_price(kCostScaled, f, costs, ArrivalOrder::Identity(2));
  EXPECT_EQ(out.winners, SellerSet({0}));
  EXPECT_DOUBLE_EQ(out.posted_prices[0], 5.0);
  EXPECT_DOUBLE_EQ(out.posted_prices[1], 2.0);
  EXPECT_DOUBLE_EQ(out.payments[0], 5.0);
  EXPECT_FALSE(out.acceptance[1]);
}

TEST(OnlineTest, CostEqualToPriceIsRejected) {
  const AdditiveOracle f({10.0});
  const auto order = ArrivalOrder::Identity(1);
  EXPECT_TRUE(run_posted_price(kCostScaled, f, std::vector<double>{4.99}, order)
                  .acceptance[0]);
  EXPECT_FALSE(run_posted_price(kCostScaled, f, std::vector<double>{5.0}, order)
                   .acceptance[0]);
}

TEST(OnlineTest, OrderDoesNotMatterForModularValue) {
  const AdditiveOracle f({10.0, 4.0, 6.0, 1.0});
  const std::vector<double> costs = {3.0, 1.0, 3.5, 0.2};
  for (const ScoringRule& rule :
       {kCostScaled, ScoringRule::Of(RuleKind::kGreedyMargin)}) {
    EXPECT_EQ(run_online_meta(rule, f, costs, ArrivalOrder::Identity(4)),
              run_online_meta(rule, f, costs, ArrivalOrder::Reverse(4)));
  }
}

TEST(OnlineTest, PostedPriceAgreesWithOnlineSelection) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = random_instance(1 + seed % 12, seed);
    const CoverageOracle f(*inst.coverage);
    const auto order = ArrivalOrder::Random(f.num_sellers(), seed);
    for (RuleKind kind : {RuleKind::kGreedyMargin, RuleKind::kGreedyRate,
                          RuleKind::kRoiGreedy, RuleKind::kCostScaled}) {
      const ScoringRule rule = ScoringRule::Of(kind);
      const auto posted = run_posted_price(rule, f, inst.costs, order);
      EXPECT_EQ(posted.winners, run_online_meta(rule, f, inst.costs, order))
          << rule_name(kind) << " seed " << seed;
      for (SellerId i : posted.winners) {
        EXPECT_GT(posted.payments[i], inst.costs[i]);
      }
    }
  }
}

TEST(OnlineTest, RejectsUnsupportedInput) {
  const AdditiveOracle f({1.0, 2.0});
  const std::vector<double> costs = {0.5, 0.5};
  EXPECT_THROW(run_online_meta(ScoringRule::Of(RuleKind::kDistortedGreedy), f,
                               costs, ArrivalOrder::Identity(2)),
               UnsupportedRuleError);
  EXPECT_THROW(run_online_meta(kCostScaled, f, costs, ArrivalOrder::Identity(3)),
               InputError);
  EXPECT_THROW(ArrivalOrder(std::vector<SellerId>{0, 0}), InputError);
}

TEST(ArrivalOrderTest, RandomIsDeterministicPermutation) {
  const auto a = ArrivalOrder::Random(20, 5);
  EXPECT_EQ(a, ArrivalOrder::Random(20, 5));
  EXPECT_NE(a, ArrivalOrder::Random(20, 6));
  EXPECT_EQ(ArrivalOrder::Reverse(3), ArrivalOrder(std::vector<SellerId>{2, 1, 0}));
}

}  // namespace
}  // namespace procauction
