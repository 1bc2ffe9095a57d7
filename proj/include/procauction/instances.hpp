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

// Coverage instances from SNAP-style edge lists and random generators.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/random.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

// Directed graph read from an edge list. Source nodes act as sets, target
// nodes as the vertices they cover. Nodes are numbered compactly in order
// of their original ids.
class BipartiteGraph {
 public:
  using NodeId = std::uint64_t;

  BipartiteGraph() = default;
  explicit BipartiteGraph(std::vector<std::pair<NodeId, NodeId>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    for (const auto& [u, v] : edges_) {
      nodes_.push_back(u);
      nodes_.push_back(v);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    out_.assign(nodes_.size(), {});
    in_degree_.assign(nodes_.size(), 0);
    for (const auto& [u, v] : edges_) {
      const std::size_t a = index_of(u), b = index_of(v);
      out_[a].push_back(b);
      ++in_degree_[b];
    }
  }

  std::span<const std::pair<NodeId, NodeId>> edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }
  NodeId node_id(std::size_t index) const { return nodes_[index]; }

  std::size_t index_of(NodeId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) {
      throw InputError("unknown node id " + std::to_string(id));
    }
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  // Out-neighbours (node indices, sorted) of node `index`.
  std::span<const std::size_t> out_neighbors(std::size_t index) const {
    return out_[index];
  }
  std::size_t out_degree(std::size_t index) const { return out_[index].size(); }
  std::size_t in_degree(std::size_t index) const { return in_degree_[index]; }

  std::size_t num_sources() const {
    return static_cast<std::size_t>(
        std::count_if(out_.begin(), out_.end(),
                      [](const auto& o) { return !o.empty(); }));
  }
  std::size_t num_targets() const {
    return static_cast<std::size_t>(std::count_if(
        in_degree_.begin(), in_degree_.end(), [](auto d) { return d > 0; }));
  }

 private:
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<NodeId> nodes_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> in_degree_;
};

// Reads "# comment" lines and "<int> <int>" edge lines. Blank lines are
// ignored. Throws ParseError with the 1-based line number otherwise.
inline BipartiteGraph parse_edge_list(std::istream& in) {
  std::vector<std::pair<BipartiteGraph::NodeId, BipartiteGraph::NodeId>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    auto skip_ws = [&] {
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest[0]))) {
        rest.remove_prefix(1);
      }
    };
    skip_ws();
    if (rest.empty() || rest[0] == '#') continue;
    BipartiteGraph::NodeId ends[2];
    for (auto& e : ends) {
      skip_ws();
      const char* first = rest.data();
      const char* last = rest.data() + rest.size();
      auto [ptr, ec] = std::from_chars(first, last, e);
      if (ec != std::errc() ||
          (ptr != last && !std::isspace(static_cast<unsigned char>(*ptr)))) {
        throw ParseError(line_no, "expected two nonnegative integers, got '" +
                                      line + "'");
      }
      rest.remove_prefix(static_cast<std::size_t>(ptr - first));
    }
    skip_ws();
    if (!rest.empty()) {
      throw ParseError(line_no, "trailing characters in '" + line + "'");
    }
    edges.emplace_back(ends[0], ends[1]);
  }
  return BipartiteGraph(std::move(edges));
}

enum class SetNodes {
  kAllNodes,     // every node is a candidate set (possibly empty)
  kSourceNodes,  // only nodes with at least one out-edge
};
enum class VertexValue { kInDegree, kUnit };
enum class BaseCost { kOutDegree, kCoveredValue };

struct ExperimentConfig {
  std::size_t n = 100;
  double s = 1.0;
  std::size_t instances = 100;
  std::uint64_t seed = 1;
  SetNodes set_nodes = SetNodes::kAllNodes;
  VertexValue vertex_value = VertexValue::kInDegree;
  BaseCost base_cost = BaseCost::kOutDegree;
};

struct GeneratedInstance {
  std::shared_ptr<const CoverageInstance> coverage;
  std::vector<double> costs;
  double kappa = 1.0;
  // Graph node id of each seller.
  std::vector<BipartiteGraph::NodeId> source_nodes;
};

// Samples cfg.n set nodes without replacement (seeded by (cfg.seed, index)),
// values each covered vertex by its in-degree and sets base cost to the
// set's out-degree, then scales all costs by one kappa ~ U[s, s^2].
inline GeneratedInstance build_instance(const BipartiteGraph& graph,
                                        const ExperimentConfig& cfg,
                                        std::uint64_t index) {
  if (!(cfg.s >= 1.0)) throw InputError("cost scale s must be at least 1");
  std::vector<std::size_t> pool;
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    if (cfg.set_nodes == SetNodes::kAllNodes || graph.out_degree(v) > 0) {
      pool.push_back(v);
    }
  }
  if (cfg.n > pool.size()) {
    throw CapacityError("requested " + std::to_string(cfg.n) +
                        " sets but the graph has " +
                        std::to_string(pool.size()));
  }
  if (cfg.n == 0) throw InputError("instance size n must be positive");

  auto rng = RandomSeed(cfg.seed).derive(index).stream(0x1257a7ceULL);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(cfg.n);
  std::sort(pool.begin(), pool.end());

  std::unordered_map<std::size_t, std::size_t> vertex_of;
  std::vector<std::size_t> targets;
  for (std::size_t u : pool) {
    for (std::size_t v : graph.out_neighbors(u)) targets.push_back(v);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (std::size_t k = 0; k < targets.size(); ++k) vertex_of[targets[k]] = k;

  CoverageInstance inst;
  inst.n_sets = cfg.n;
  inst.vertex_values.resize(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    inst.vertex_values[k] =
        cfg.vertex_value == VertexValue::kInDegree
            ? static_cast<double>(graph.in_degree(targets[k]))
            : 1.0;
  }
  GeneratedInstance out;
  for (std::size_t u : pool) {
    std::vector<std::size_t> cover;
    for (std::size_t v : graph.out_neighbors(u)) cover.push_back(vertex_of[v]);
    inst.covers.push_back(std::move(cover));
    out.source_nodes.push_back(graph.node_id(u));
  }
  inst.Normalize();

  if (cfg.s > 1.0) {
    std::uniform_real_distribution<double> kappa(cfg.s, cfg.s * cfg.s);
    out.kappa = kappa(rng);
  }
  out.costs.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    double base = 0.0;
    if (cfg.base_cost == BaseCost::kOutDegree) {
      base = static_cast<double>(inst.covers[i].size());
    } else {
      for (std::size_t v : inst.covers[i]) base += inst.vertex_values[v];
    }
    out.costs[i] = out.kappa * base;
  }
  out.coverage = std::make_shared<const CoverageInstance>(std::move(inst));
  return out;
}

// |{i : f(i | empty) > c_i}| / n.
inline double active_fraction(const ValuationOracle& oracle,
                              std::span<const double> costs) {
  const std::size_t n = oracle.num_sellers();
  if (n == 0) return 0.0;
  std::size_t active = 0;
  for (SellerId i = 0; i < n; ++i) {
    if (oracle.marginal(i, {}) > costs[i]) ++active;
  }
  return static_cast<double>(active) / static_cast<double>(n);
}

inline double active_fraction(const CoverageInstance& instance,
                              std::span<const double> costs) {
  return active_fraction(CoverageOracle(instance), costs);
}

struct RandomInstance {
  std::shared_ptr<const CoverageInstance> coverage;
  std::vector<double> costs;
};

// n sets over 3n vertices; each set covers each vertex independently with
// probability 0.25; vertex values ~ U[0, 10]; c_i ~ U[0, 1.5 f(i | empty)].
inline RandomInstance random_instance(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("random_instance: n must be positive");
  auto rng = RandomSeed(seed).stream(0x7a4d0ULL);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::bernoulli_distribution covers(0.25);
  CoverageInstance inst;
  inst.n_sets = n;
  inst.vertex_values.resize(3 * n);
  for (double& v : inst.vertex_values) v = value(rng);
  inst.covers.resize(n);
  for (auto& c : inst.covers) {
    for (std::size_t v = 0; v < 3 * n; ++v) {
      if (covers(rng)) c.push_back(v);
    }
  }
  inst.Normalize();
  RandomInstance out;
  out.costs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0.0;
    for (std::size_t v : inst.covers[i]) f += inst.vertex_values[v];
    std::uniform_real_distribution<double> cost(0.0, 1.5 * f);
    out.costs[i] = f > 0.0 ? cost(rng) : 0.0;
  }
  out.coverage = std::make_shared<const CoverageInstance>(std::move(inst));
  return out;
}

// Random directed graph with heavy-tailed in- and out-degrees, shaped like
// a small social voting network: `num_nodes` nodes, about `num_edges`
// distinct edges, targets drawn from the first `num_targets` nodes with
// Zipf-like weights.
inline BipartiteGraph synthetic_graph(std::size_t num_nodes,
                                      std::size_t num_edges,
                                      std::size_t num_targets,
                                      std::uint64_t seed) {
  if (num_nodes == 0 || num_targets == 0 || num_targets > num_nodes) {
    throw InputError("synthetic_graph: need 0 < num_targets <= num_nodes");
  }
  auto rng = RandomSeed(seed).stream(0x5a7c4ULL);
  std::vector<double> target_w(num_targets), source_w(num_nodes);
  for (std::size_t i = 0; i < num_targets; ++i) {
    target_w[i] = 1.0 / std::pow(static_cast<double>(i) + 1.0, 0.9);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    source_w[i] = 1.0 / std::pow(static_cast<double>(i) + 10.0, 1.1);
  }
  std::discrete_distribution<std::size_t> target(target_w.begin(),
                                                 target_w.end());
  std::discrete_distribution<std::size_t> source(source_w.begin(),
                                                 source_w.end());
  // Shuffle node labels so degree is not a function of the id.
  std::vector<BipartiteGraph::NodeId> label(num_nodes);
  std::iota(label.begin(), label.end(), BipartiteGraph::NodeId{0});
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<std::pair<BipartiteGraph::NodeId, BipartiteGraph::NodeId>> edges;
  edges.reserve(num_edges + num_nodes);
  // Every node appears at least once.
  for (std::size_t u = 0; u < num_nodes; ++u) {
    std::size_t v = target(rng);
    if (v == u) v = (v + 1) % num_targets;
    edges.emplace_back(label[u], label[v]);
  }
  while (edges.size() < num_edges) {
    const std::size_t u = source(rng), v = target(rng);
    if (u != v) edges.emplace_back(label[u], label[v]);
  }
  return BipartiteGraph(std::move(edges));
}

}  // namespace procauction
