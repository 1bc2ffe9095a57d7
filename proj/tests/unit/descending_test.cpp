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

#include "procauction/descending.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.hpp"

namespace procauction {
namespace {

TEST(DescendingTest, SingleSellerExactDemand) {
  const AdditiveOracle f({10.0});
  const std::vector<double> bids = {3.0};
  ExactDemandOracle demand(f);
  LexicographicSchedule schedule;
  const auto out = run_descending(f, bids, demand, schedule, 0.5);
  EXPECT_EQ(out.auction.winners, SellerSet({0}));
  EXPECT_DOUBLE_EQ(out.auction.payments[0], 9.5);
  EXPECT_EQ(out.iterations, 1u);
}

TEST(DescendingTest, AllSellersDropWhenBidsExceedValue) {
  const AdditiveOracle f({2.0, 3.0});
  const std::vector<double> bids = {5.0, 5.0};
  ExactDemandOracle demand(f);
  RoundRobinSchedule schedule;
  const auto out = run_descending(f, bids, demand, schedule, 0.25);
  EXPECT_TRUE(out.auction.winners.empty());
  EXPECT_DOUBLE_EQ(out.auction.total_payment(), 0.0);
}

TEST(DescendingTest, RejectsNonPositiveEpsilon) {
  const AdditiveOracle f({1.0});
  ExactDemandOracle demand(f);
  LexicographicSchedule schedule;
  EXPECT_THROW(run_descending(f, std::vector<double>{0.5}, demand, schedule, 0.0),
               InputError);
}

TEST(DescendingTest, FamilyWithExactDemandEndsNearTwo) {
  const std::size_t L = 100;
  const AdversarialFamilyOracle f(L);
  const auto bids = f.bids();
  AdversarialFamilyDemandOracle demand(f);
  AdversarialFamilySchedule schedule(L);
  const auto out = run_descending(f, bids, demand, schedule, 1.0 / (2.0 * L));
  EXPECT_LE(welfare(f, bids, out.auction.winners), 2.0 + 1e-9);
  // All regular sellers: L - L * (1 / L).
  EXPECT_NEAR(welfare(f, bids, SellerSet::All(L)), static_cast<double>(L - 1),
              1e-9);
}

TEST(DescendingTest, FamilyDemandMatchesExactDemand) {
  const AdversarialFamilyOracle f(4);
  AdversarialFamilyDemandOracle fast(f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> price(0.0, 4.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> p(6);
    for (double& x : p) x = price(rng);
    const SellerSet active = testing::RandomSet(rng, 6, 0.7);
    EXPECT_EQ(fast.Demand(active, p, std::nullopt), exact_demand(f, active, p));
  }
}

TEST(ExactDemandTest, Examples) {
  const AdditiveOracle f({10.0});
  EXPECT_TRUE(exact_demand(f, {0}, std::vector<double>{10.0}).empty());
  EXPECT_EQ(exact_demand(f, {0}, std::vector<double>{9.5}), SellerSet({0}));
  EXPECT_TRUE(exact_demand(f, {}, std::vector<double>{1.0}).empty());
}

TEST(CostScaledDemandTest, Examples) {
  const AdditiveOracle f({10.0});
  CostScaledDemandOracle at4;
  at4.BeginRun(f);
  EXPECT_TRUE(cost_scaled_demand(at4, std::nullopt, {0},
                                 std::vector<double>{4.0})
                  .empty());
  EXPECT_EQ(cost_scaled_demand(at4, 0, {0}, std::vector<double>{4.0}),
            SellerSet({0}));
  EXPECT_DOUBLE_EQ(at4.admission_marginals()[0], 10.0);

  CostScaledDemandOracle at6;
  at6.BeginRun(f);
  EXPECT_TRUE(cost_scaled_demand(at6, 0, {0}, std::vector<double>{6.0}).empty());
}

TEST(CostScaledDemandTest, MisuseIsRejected) {
  const AdditiveOracle f({10.0});
  CostScaledDemandOracle demand;
  EXPECT_THROW(demand.Demand({0}, std::vector<double>{1.0}, std::nullopt),
               MisuseError);
  demand.BeginRun(f);
  EXPECT_THROW(demand.BeginRun(f), MisuseError);
}

TEST(CostScaledDescendingTest, ExtractsPositiveSurplus) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = random_instance(2 + seed % 8, seed);
    const CoverageOracle f(*inst.coverage);
    CostScaledDemandOracle demand;
    RandomSchedule schedule(seed);
    const auto out = run_descending(f, inst.costs, demand, schedule, 0.01);
    for (SellerId i : out.auction.winners) {
      EXPECT_GE(out.auction.payments[i], inst.costs[i]);
    }
    EXPECT_GE(f.value(out.auction.winners) - 2.0 * out.auction.total_payment(),
              -1e-9);
  }
}

TEST(DescendingFromOnlineTest, SingleSeller) {
  const AdditiveOracle f({10.0});
  const auto rule = ScoringRule::Of(RuleKind::kCostScaled);
  const auto win = run_descending_from_online(rule, f, std::vector<double>{3.0},
                                              ArrivalOrder::Identity(1));
  EXPECT_EQ(win.auction.winners, SellerSet({0}));
  EXPECT_DOUBLE_EQ(win.auction.payments[0], 5.0);
  const auto lose = run_descending_from_online(
      rule, f, std::vector<double>{6.0}, ArrivalOrder::Identity(1));
  EXPECT_TRUE(lose.auction.winners.empty());
}

TEST(DescendingFromOnlineTest, MatchesPostedPrice) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = random_instance(1 + seed % 10, seed);
    const CoverageOracle f(*inst.coverage);
    const auto order = ArrivalOrder::Random(f.num_sellers(), seed);
    const auto rule = ScoringRule::Of(RuleKind::kCostScaled);
    OnlineDescendingOptions opt;
    opt.epsilon_stepping = true;
    const auto desc = run_descending_from_online(rule, f, inst.costs, order, opt);
    const auto posted = run_posted_price(rule, f, inst.costs, order);
    EXPECT_EQ(desc.auction.winners, posted.winners);
    EXPECT_EQ(desc.auction.payments, posted.payments);
  }
}

}  // namespace
}  // namespace procauction
