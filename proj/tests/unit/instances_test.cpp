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

#include "procauction/instances.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "test_util.hpp"

namespace procauction {
namespace {

BipartiteGraph Parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

TEST(ParseEdgeListTest, CommentsBlankLinesAndDuplicates) {
  const BipartiteGraph g = Parse("# header\n1 2\n\n1 3\n1 2\n4 2\n");
  EXPECT_EQ(g.num_nodes(), 4u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(g.num_sources(), 2u);
  EXPECT_EQ(g.num_targets(), 2u);
  EXPECT_EQ(g.out_degree(g.index_of(1)), 2u);
  EXPECT_EQ(g.in_degree(g.index_of(2)), 2u);
  EXPECT_THROW(g.index_of(9), InputError);
}

TEST(ParseEdgeListTest, ReportsLineNumbers) {
  try {
    Parse("# ok\n1 2\n3 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    Parse("1 2 3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(Parse("-1 2\n"), ParseError);
}

TEST(BuildInstanceTest, EmptyGraphCannotSupplySets) {
  const BipartiteGraph g = Parse("# nothing\n");
  EXPECT_EQ(g.num_nodes(), 0u);
  ExperimentConfig cfg;
  cfg.n = 1;
  EXPECT_THROW(build_instance(g, cfg, 0), CapacityError);
}

TEST(BuildInstanceTest, UnitScaleKeepsOutDegreeCosts) {
  const BipartiteGraph g = Parse("1 2\n1 3\n2 3\n3 4\n");
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.s = 1.0;
  const GeneratedInstance inst = build_instance(g, cfg, 0);
  EXPECT_DOUBLE_EQ(inst.kappa, 1.0);
  const CoverageOracle f(*inst.coverage);
  for (SellerId i = 0; i < 4; ++i) {
    const std::size_t node = g.index_of(inst.source_nodes[i]);
    EXPECT_DOUBLE_EQ(inst.costs[i], static_cast<double>(g.out_degree(node)));
    double value = 0.0;
    for (std::size_t v : g.out_neighbors(node)) {
      value += static_cast<double>(g.in_degree(v));
    }
    EXPECT_DOUBLE_EQ(f.value({i}), value);
  }
  // Node 4 has no out-edges: an empty set with cost 0.
  for (SellerId i = 0; i < 4; ++i) {
    if (inst.source_nodes[i] == 4) {
      EXPECT_DOUBLE_EQ(inst.costs[i], 0.0);
      EXPECT_DOUBLE_EQ(f.value({i}), 0.0);
    }
  }
}

TEST(BuildInstanceTest, KappaScalesAllCostsWithinRange) {
  const BipartiteGraph g = synthetic_graph(300, 2000, 100, 4);
  ExperimentConfig cfg;
  cfg.n = 50;
  cfg.s = 2.0;
  ExperimentConfig base = cfg;
  base.s = 1.0;
  for (std::uint64_t idx = 0; idx < 10; ++idx) {
    const auto scaled = build_instance(g, cfg, idx);
    const auto plain = build_instance(g, base, idx);
    EXPECT_GE(scaled.kappa, 2.0);
    EXPECT_LE(scaled.kappa, 4.0);
    EXPECT_EQ(scaled.source_nodes, plain.source_nodes);
    for (std::size_t i = 0; i < 50; ++i) {
      EXPECT_DOUBLE_EQ(scaled.costs[i], scaled.kappa * plain.costs[i]);
    }
  }
}

TEST(BuildInstanceTest, DeterministicPerSeedAndIndex) {
  const BipartiteGraph g = synthetic_graph(300, 2000, 100, 4);
  ExperimentConfig cfg;
  cfg.n = 40;
  cfg.s = 2.0;
  const auto a = build_instance(g, cfg, 3);
  const auto b = build_instance(g, cfg, 3);
  EXPECT_EQ(a.source_nodes, b.source_nodes);
  EXPECT_EQ(a.costs, b.costs);
  EXPECT_NE(a.source_nodes, build_instance(g, cfg, 4).source_nodes);
  cfg.s = 0.5;
  EXPECT_THROW(build_instance(g, cfg, 0), InputError);
}

TEST(BuildInstanceTest, SourceNodesOption) {
  const BipartiteGraph g = Parse("1 2\n1 3\n2 3\n3 4\n");
  ExperimentConfig cfg;
  cfg.set_nodes = SetNodes::kSourceNodes;
  cfg.n = 3;
  const auto inst = build_instance(g, cfg, 0);
  for (auto id : inst.source_nodes) EXPECT_NE(id, 4u);
  cfg.n = 4;
  EXPECT_THROW(build_instance(g, cfg, 0), CapacityError);
}

TEST(ActiveFractionTest, Examples) {
  const AdditiveOracle f({3.0, 2.0});
  EXPECT_DOUBLE_EQ(active_fraction(f, std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(active_fraction(f, std::vector<double>{5.0, 5.0}), 0.0);
  EXPECT_DOUBLE_EQ(active_fraction(f, std::vector<double>{4.0, 1.0}), 0.5);
}

TEST(RandomInstanceTest, ShapeAndDeterminism) {
  const auto one = random_instance(1, 8);
  EXPECT_EQ(one.coverage->n_sets, 1u);
  EXPECT_EQ(one.coverage->vertex_values.size(), 3u);
  const auto a = random_instance(20, 5);
  const auto b = random_instance(20, 5);
  EXPECT_EQ(a.costs, b.costs);
  EXPECT_EQ(a.coverage->covers, b.coverage->covers);
  const CoverageOracle f(*a.coverage);
  for (SellerId i = 0; i < 20; ++i) {
    EXPECT_GE(a.costs[i], 0.0);
    EXPECT_LE(a.costs[i], 1.5 * f.value({i}) + 1e-12);
  }
  EXPECT_THROW(random_instance(0, 1), InputError);
}

TEST(SyntheticGraphTest, DeterministicAndSized) {
  const BipartiteGraph a = synthetic_graph(500, 3000, 200, 9);
  const BipartiteGraph b = synthetic_graph(500, 3000, 200, 9);
  EXPECT_EQ(a.num_edges(), b.num_edges());
  EXPECT_LE(a.num_edges(), 3500u);
  EXPECT_LE(a.num_targets(), 200u);
  EXPECT_LE(a.num_nodes(), 500u);
}

}  // namespace
}  // namespace procauction
