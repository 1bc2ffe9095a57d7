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

#include "procauction/harness.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace procauction {
namespace {

HarnessConfig SmallConfig() {
  HarnessConfig cfg;
  cfg.synthetic = {400, 3000, 150, 2};
  cfg.n = {20};
  cfg.s = {1.0, 2.0};
  cfg.instances = 5;
  cfg.seed = 11;
  return cfg;
}

TEST(HarnessTest, OneRecordPerInstanceAndRule) {
  HarnessConfig cfg = SmallConfig();
  cfg.s = {2.0};
  cfg.instances = 10;
  const BipartiteGraph g = load_graph(cfg);
  const auto records = run_experiment(g, cfg);
  EXPECT_EQ(records.size(), 10 * cfg.rules.size());
  for (const RunRecord& r : records) {
    EXPECT_FALSE(r.skipped) << r.reason;
    EXPECT_GE(r.active_fraction, 0.0);
    EXPECT_LE(r.active_fraction, 1.0);
  }
}

TEST(HarnessTest, CsvIdenticalAcrossWorkerCounts) {
  HarnessConfig cfg = SmallConfig();
  cfg.mechanisms = {MechanismKind::kSealedBidAuto, MechanismKind::kPostedPrice};
  const BipartiteGraph g = load_graph(cfg);
  std::ostringstream a, b;
  cfg.workers = 1;
  write_records_csv(a, run_experiment(g, cfg));
  cfg.workers = 3;
  write_records_csv(b, run_experiment(g, cfg));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind(kSchemaLine, 0), 0u);
}

TEST(HarnessTest, VcgMatchesExactOptimum) {
  HarnessConfig cfg = SmallConfig();
  cfg.n = {12};
  cfg.s = {2.0};
  cfg.mechanisms = {MechanismKind::kVcg};
  const BipartiteGraph g = load_graph(cfg);
  for (std::size_t idx = 0; idx < 3; ++idx) {
    const auto records = run_instance(g, cfg, 12, 2.0, idx);
    ASSERT_EQ(records.size(), 1u);
    ExperimentConfig ec;
    ec.n = 12;
    ec.s = 2.0;
    ec.seed = cfg.seed;
    const auto inst = build_instance(g, ec, idx);
    const CoverageOracle f(*inst.coverage);
    EXPECT_NEAR(records[0].welfare, exact_opt(f, inst.costs).welfare, 1e-9);
    EXPECT_NEAR(records[0].welfare,
                recompute_welfare(*inst.coverage, inst.costs,
                                  exact_opt(f, inst.costs).set),
                1e-9);
  }
}

TEST(HarnessTest, VcgSkippedAboveCap) {
  HarnessConfig cfg = SmallConfig();
  cfg.n = {30};
  cfg.vcg_max_n = 24;
  cfg.mechanisms = {MechanismKind::kVcg};
  const BipartiteGraph g = load_graph(cfg);
  const auto records = run_instance(g, cfg, 30, 1.0, 0);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_TRUE(records[0].skipped);
  EXPECT_FALSE(records[0].reason.empty());
}

TEST(HarnessTest, RecomputeWelfare) {
  const CoverageInstance inst = testing::TwoSellerCoverage();
  const std::vector<double> costs = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(recompute_welfare(inst, costs, {0, 1}), 4.0);
  EXPECT_DOUBLE_EQ(recompute_welfare(inst, costs, {1}), 4.0);
  EXPECT_DOUBLE_EQ(recompute_welfare(inst, costs, {}), 0.0);
}

TEST(SpearmanTest, KnownValues) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> up = {2, 4, 6, 8, 10};
  const std::vector<double> down = {5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, up), 1.0, 1e-12);
  EXPECT_NEAR(spearman(x, down), -1.0, 1e-12);
  // Ties get average ranks: ranks of y are 1.5, 1.5, 3, 4, 5.
  const std::vector<double> tied = {1, 1, 2, 3, 4};
  EXPECT_NEAR(spearman(x, tied), 0.9746794344808963, 1e-12);
}

TEST(HarnessConfigTest, ParsesAndRejects) {
  const auto cfg = harness_config_from_json(nlohmann::json::parse(
      R"({"n": [50, 100], "s": 2, "rules": ["cost-scaled"],
          "mechanisms": ["vcg", "posted-price"], "set_nodes": "sources"})"));
  EXPECT_EQ(cfg.n, (std::vector<std::size_t>{50, 100}));
  EXPECT_EQ(cfg.s, (std::vector<double>{2.0}));
  ASSERT_EQ(cfg.rules.size(), 1u);
  EXPECT_EQ(cfg.rules[0], RuleKind::kCostScaled);
  EXPECT_EQ(cfg.mechanisms.size(), 2u);
  EXPECT_EQ(cfg.set_nodes, SetNodes::kSourceNodes);
  EXPECT_EQ(harness_config_from_json(
                nlohmann::json::parse(R"({"rules": "all"})"))
                .rules.size(),
            kAllRuleKinds.size());
  EXPECT_THROW(harness_config_from_json(nlohmann::json::parse(R"({"nn": 5})")),
               InputError);
  EXPECT_THROW(harness_config_from_json(
                   nlohmann::json::parse(R"({"rules": ["bogus"]})")),
               InputError);
  EXPECT_THROW(harness_config_from_json(
                   nlohmann::json::parse(R"({"mechanisms": ["bogus"]})")),
               InputError);
  EXPECT_THROW(load_harness_config("/nonexistent/config.json"), FileError);
}

TEST(BenchTest, LazyUsesFewerQueries) {
  HarnessConfig cfg = SmallConfig();
  cfg.n = {40};
  cfg.rules = {RuleKind::kCostScaled, RuleKind::kGreedyMargin};
  cfg.vcg_max_n = 20;
  cfg.mechanisms = {MechanismKind::kSealedBid, MechanismKind::kVcg};
  const BipartiteGraph g = load_graph(cfg);
  const auto bench = run_bench(g, cfg);
  bool saw_vcg = false;
  for (const BenchRecord& naive : bench) {
    if (naive.mechanism == "vcg") {
      saw_vcg = true;
      EXPECT_TRUE(naive.skipped);
      EXPECT_FALSE(naive.reason.empty());
    }
    if (naive.variant != "naive" || naive.skipped) continue;
    for (const BenchRecord& lazy : bench) {
      if (lazy.variant == "lazy" && lazy.mechanism == naive.mechanism &&
          lazy.rule == naive.rule) {
        EXPECT_LT(lazy.oracle_queries, naive.oracle_queries)
            << naive.mechanism << " " << naive.rule;
      }
    }
  }
  EXPECT_TRUE(saw_vcg);
}

TEST(FormatRealTest, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.5, 1e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
}

}  // namespace
}  // namespace procauction
