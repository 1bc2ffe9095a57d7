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

// Experiment and benchmark drivers: mechanism x rule x instance matrices
// over graph-derived coverage instances, CSV reports and summaries.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <span>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "procauction/descending.hpp"
#include "procauction/errors.hpp"
#include "procauction/exact_optimizer.hpp"
#include "procauction/instances.hpp"
#include "procauction/online.hpp"
#include "procauction/random.hpp"
#include "procauction/scoring.hpp"
#include "procauction/sealed_bid.hpp"
#include "procauction/selection.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Shortest round-trip decimal text of a double.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Mechanisms.

enum class MechanismKind {
  kSealedBid,             // naive greedy selection and payments
  kSealedBidLazy,         // lazy variant, diminishing-return rules only
  kSealedBidAuto,         // lazy where supported, pruned naive otherwise
  kPostedPrice,           // online rules only
  kDescendingOnline,      // descending replay of the posted prices
  kDescendingCostScaled,  // cost-scaled demand oracle, round-robin schedule
  kVcg,
};

inline constexpr std::array<MechanismKind, 7> kAllMechanismKinds = {
    MechanismKind::kSealedBid,        MechanismKind::kSealedBidLazy,
    MechanismKind::kSealedBidAuto,    MechanismKind::kPostedPrice,
    MechanismKind::kDescendingOnline, MechanismKind::kDescendingCostScaled,
    MechanismKind::kVcg};

inline std::string_view mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kSealedBid: return "sealed-bid";
    case MechanismKind::kSealedBidLazy: return "sealed-bid-lazy";
    case MechanismKind::kSealedBidAuto: return "sealed-bid-auto";
    case MechanismKind::kPostedPrice: return "posted-price";
    case MechanismKind::kDescendingOnline: return "descending-online";
    case MechanismKind::kDescendingCostScaled: return "descending-cost-scaled";
    case MechanismKind::kVcg: return "vcg";
  }
  return "?";
}

inline MechanismKind parse_mechanism(std::string_view name) {
  for (MechanismKind k : kAllMechanismKinds) {
    if (mechanism_name(k) == name) return k;
  }
  throw InputError("unknown mechanism '" + std::string(name) + "'");
}

// Mechanisms that ignore the scoring rule produce one record per instance.
inline bool uses_rule(MechanismKind kind) {
  return kind != MechanismKind::kDescendingCostScaled &&
         kind != MechanismKind::kVcg;
}

// ---------------------------------------------------------------------------
// Configuration.

struct SyntheticGraphSpec {
  std::size_t nodes = 7115;
  std::size_t edges = 103689;
  std::size_t targets = 2381;
  std::uint64_t seed = 1;
};

struct HarnessConfig {
  // Edge-list path, or "synthetic" for a generated graph.
  std::string dataset = "synthetic";
  SyntheticGraphSpec synthetic;
  std::vector<std::size_t> n{100};
  std::vector<double> s{1.0, 2.0, 4.0};
  std::size_t instances = 100;
  std::uint64_t seed = 1;
  std::vector<MechanismKind> mechanisms{MechanismKind::kSealedBidAuto};
  std::vector<RuleKind> rules{kAllRuleKinds.begin(), kAllRuleKinds.end()};
  SetNodes set_nodes = SetNodes::kAllNodes;
  VertexValue vertex_value = VertexValue::kInDegree;
  BaseCost base_cost = BaseCost::kOutDegree;
  double noise_epsilon = 0.05;
  double descending_epsilon = 0.01;
  std::string order = "identity";  // identity | reverse | random
  std::size_t vcg_max_n = ExactOptimizerConfig{}.max_exhaustive_n;
  std::size_t workers = 1;
  std::string csv;         // records
  std::string timing_csv;  // wall times
  std::string summary_csv;
  // Bench only: largest n for which payments are computed.
  std::size_t bench_payment_max_n = 500;
};

namespace detail {

template <class T>
void ReadField(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
std::vector<T> ReadList(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace detail

// Parses a JSON experiment config. Unknown keys are rejected so typos do
// not silently fall back to defaults.
inline HarnessConfig harness_config_from_json(const nlohmann::json& j) {
  static const char* kKeys[] = {
      "dataset",      "synthetic",   "n",          "s",
      "instances",    "seed",        "mechanisms", "rules",
      "set_nodes",    "vertex_value", "base_cost", "noise_epsilon",
      "descending_epsilon", "order", "vcg_max_n",  "workers",
      "csv",          "timing_csv",  "summary_csv", "bench_payment_max_n"};
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
          return key == k;
        }) == std::end(kKeys)) {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  HarnessConfig cfg;
  try {
    detail::ReadField(j, "dataset", cfg.dataset);
    if (j.contains("synthetic")) {
      const auto& g = j.at("synthetic");
      detail::ReadField(g, "nodes", cfg.synthetic.nodes);
      detail::ReadField(g, "edges", cfg.synthetic.edges);
      detail::ReadField(g, "targets", cfg.synthetic.targets);
      detail::ReadField(g, "seed", cfg.synthetic.seed);
    }
    if (j.contains("n")) cfg.n = detail::ReadList<std::size_t>(j.at("n"));
    if (j.contains("s")) cfg.s = detail::ReadList<double>(j.at("s"));
    detail::ReadField(j, "instances", cfg.instances);
    detail::ReadField(j, "seed", cfg.seed);
    if (j.contains("mechanisms")) {
      cfg.mechanisms.clear();
      for (const auto& m : detail::ReadList<std::string>(j.at("mechanisms"))) {
        cfg.mechanisms.push_back(parse_mechanism(m));
      }
    }
    if (j.contains("rules")) {
      cfg.rules.clear();
      for (const auto& r : detail::ReadList<std::string>(j.at("rules"))) {
        if (r == "all") {
          cfg.rules.assign(kAllRuleKinds.begin(), kAllRuleKinds.end());
        } else {
          cfg.rules.push_back(ScoringRule::Parse(r).kind);
        }
      }
    }
    if (j.contains("set_nodes")) {
      const auto v = j.at("set_nodes").get<std::string>();
      if (v == "all") cfg.set_nodes = SetNodes::kAllNodes;
      else if (v == "sources") cfg.set_nodes = SetNodes::kSourceNodes;
      else throw InputError("set_nodes must be 'all' or 'sources'");
    }
    if (j.contains("vertex_value")) {
      const auto v = j.at("vertex_value").get<std::string>();
      if (v == "in-degree") cfg.vertex_value = VertexValue::kInDegree;
      else if (v == "unit") cfg.vertex_value = VertexValue::kUnit;
      else throw InputError("vertex_value must be 'in-degree' or 'unit'");
    }
    if (j.contains("base_cost")) {
      const auto v = j.at("base_cost").get<std::string>();
      if (v == "out-degree") cfg.base_cost = BaseCost::kOutDegree;
      else if (v == "covered-value") cfg.base_cost = BaseCost::kCoveredValue;
      else throw InputError("base_cost must be 'out-degree' or 'covered-value'");
    }
    detail::ReadField(j, "noise_epsilon", cfg.noise_epsilon);
    detail::ReadField(j, "descending_epsilon", cfg.descending_epsilon);
    detail::ReadField(j, "order", cfg.order);
    detail::ReadField(j, "vcg_max_n", cfg.vcg_max_n);
    detail::ReadField(j, "workers", cfg.workers);
    detail::ReadField(j, "csv", cfg.csv);
    detail::ReadField(j, "timing_csv", cfg.timing_csv);
    detail::ReadField(j, "summary_csv", cfg.summary_csv);
    detail::ReadField(j, "bench_payment_max_n", cfg.bench_payment_max_n);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (cfg.n.empty() || cfg.s.empty()) throw InputError("config: empty n or s list");
  if (cfg.instances == 0) throw InputError("config: instances must be positive");
  if (cfg.mechanisms.empty() || cfg.rules.empty()) {
    throw InputError("config: empty mechanism or rule list");
  }
  if (cfg.order != "identity" && cfg.order != "reverse" && cfg.order != "random") {
    throw InputError("config: order must be identity, reverse or random");
  }
  if (!(cfg.descending_epsilon > 0.0)) {
    throw InputError("config: descending_epsilon must be positive");
  }
  return cfg;
}

inline HarnessConfig load_harness_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open config '" + path + "'");
  try {
    return harness_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
}

inline BipartiteGraph load_graph(const HarnessConfig& cfg) {
  if (cfg.dataset == "synthetic") {
    return synthetic_graph(cfg.synthetic.nodes, cfg.synthetic.edges,
                           cfg.synthetic.targets, cfg.synthetic.seed);
  }
  std::ifstream in(cfg.dataset);
  if (!in) throw FileError("cannot open dataset '" + cfg.dataset + "'");
  return parse_edge_list(in);
}

// ---------------------------------------------------------------------------
// Records.

struct RunRecord {
  std::size_t instance = 0;
  std::size_t n = 0;
  double s = 1.0;
  double active_fraction = 0.0;
  std::string mechanism;
  std::string rule;  // "-" when the mechanism has no rule
  double welfare = 0.0;
  double surplus = 0.0;
  double total_payment = 0.0;
  std::size_t winner_count = 0;
  double wall_ms = 0.0;
  std::uint64_t oracle_queries = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::string reason;
};

inline constexpr const char* kSchemaLine = "#schema=1";

inline std::string record_key(const RunRecord& r) {
  return std::to_string(r.n) + "/" + format_real(r.s) + "/" +
         std::to_string(r.instance) + "/" + r.mechanism + "/" + r.rule;
}

// Records CSV. Wall times live in the timing CSV so this body is
// reproducible byte for byte.
inline void write_records_csv(std::ostream& out,
                              const std::vector<RunRecord>& records) {
  out << kSchemaLine << "\n"
      << "instance,n,s,active_fraction,mechanism,rule,status,reason,welfare,"
         "surplus,total_payment,winners,oracle_queries,seed\n";
  for (const RunRecord& r : records) {
    out << r.instance << ',' << r.n << ',' << format_real(r.s) << ','
        << format_real(r.active_fraction) << ',' << r.mechanism << ','
        << r.rule << ',' << (r.skipped ? "skipped" : "ok") << ',' << r.reason
        << ',' << format_real(r.welfare) << ',' << format_real(r.surplus)
        << ',' << format_real(r.total_payment) << ',' << r.winner_count << ','
        << r.oracle_queries << ',' << r.seed << '\n';
  }
}

inline void write_timing_csv(std::ostream& out,
                             const std::vector<RunRecord>& records) {
  out << kSchemaLine << "\n" << "key,wall_ms\n";
  for (const RunRecord& r : records) {
    out << record_key(r) << ',' << format_real(r.wall_ms) << '\n';
  }
}

// f(S) - c(S) for a coverage instance computed directly from the covers,
// independent of the oracle classes.
inline double recompute_welfare(const CoverageInstance& inst,
                                std::span<const double> costs,
                                const SellerSet& winners) {
  std::vector<char> covered(inst.vertex_values.size(), 0);
  double f = 0.0, c = 0.0;
  for (SellerId i : winners) {
    c += costs[i];
    for (std::size_t v : inst.covers[i]) {
      if (!covered[v]) {
        covered[v] = 1;
        f += inst.vertex_values[v];
      }
    }
  }
  return f - c;
}

namespace detail {

inline ArrivalOrder MakeOrder(const std::string& kind, std::size_t n,
                              std::uint64_t seed) {
  if (kind == "reverse") return ArrivalOrder::Reverse(n);
  if (kind == "random") return ArrivalOrder::Random(n, seed);
  return ArrivalOrder::Identity(n);
}

struct MechanismRun {
  SellerSet winners;
  double total_payment = 0.0;
  double surplus = 0.0;
  std::uint64_t queries = 0;
};

// Runs one (mechanism, rule) cell; returns nullopt and sets `reason` when
// the combination does not apply.
inline std::optional<MechanismRun> RunCell(
    MechanismKind mech, RuleKind kind, const HarnessConfig& cfg,
    const std::shared_ptr<const CoverageOracle>& base,
    std::span<const double> costs, std::uint64_t seed, std::string& reason) {
  const std::size_t n = costs.size();
  ScoringRule rule = ScoringRule::Of(kind);
  std::shared_ptr<const ValuationOracle> oracle = base;
  if (kind == RuleKind::kNoisyDistortedGreedy && uses_rule(mech)) {
    rule = ScoringRule::Noisy(cfg.noise_epsilon);
    oracle = std::make_shared<const NoisyOracle>(base, cfg.noise_epsilon,
                                                 hash_combine(seed, 0x401ULL));
  }
  MechanismRun run;
  auto from_auction = [&](const AuctionOutcome& out) {
    run.winners = out.winners;
    run.total_payment = out.total_payment();
    run.queries = out.oracle_queries;
  };
  const RandomSeed rs(seed);
  switch (mech) {
    case MechanismKind::kSealedBid:
      from_auction(run_sealed_bid(rule, *oracle, costs, rs));
      break;
    case MechanismKind::kSealedBidLazy:
      if (!rule.diminishing_return()) {
        reason = "lazy variant needs a diminishing-return rule";
        return std::nullopt;
      }
      from_auction(run_sealed_bid_lazy(rule, *oracle, costs, rs));
      break;
    case MechanismKind::kSealedBidAuto: {
      SealedBidOptions pruned;
      pruned.bound_pruning = true;
      from_auction(rule.diminishing_return()
                       ? run_sealed_bid_lazy(rule, *oracle, costs, rs)
                       : run_sealed_bid(rule, *oracle, costs, rs, pruned));
      break;
    }
    case MechanismKind::kPostedPrice: {
      if (!rule.online_capable()) {
        reason = "rule is not online-capable";
        return std::nullopt;
      }
      const auto out = run_posted_price(
          rule, *oracle, costs, MakeOrder(cfg.order, n, hash_combine(seed, 1)));
      run.winners = out.winners;
      run.total_payment = out.total_payment();
      run.queries = out.oracle_queries;
      break;
    }
    case MechanismKind::kDescendingOnline:
      if (!rule.online_capable()) {
        reason = "rule is not online-capable";
        return std::nullopt;
      }
      from_auction(run_descending_from_online(
                       rule, *oracle, costs,
                       MakeOrder(cfg.order, n, hash_combine(seed, 1)))
                       .auction);
      break;
    case MechanismKind::kDescendingCostScaled: {
      CostScaledDemandOracle demand;
      RoundRobinSchedule schedule;
      from_auction(run_descending(*oracle, costs, demand, schedule,
                                  cfg.descending_epsilon)
                       .auction);
      break;
    }
    case MechanismKind::kVcg:
      if (n > cfg.vcg_max_n) {
        reason = "n=" + std::to_string(n) + " exceeds the exhaustive cap " +
                 std::to_string(cfg.vcg_max_n);
        return std::nullopt;
      }
      {
        ExactOptimizerConfig ec;
        ec.max_exhaustive_n = cfg.vcg_max_n;
        from_auction(run_vcg(*oracle, costs, ec));
      }
      break;
  }
  run.surplus = base->value(run.winners) - run.total_payment;
  return run;
}

}  // namespace detail

// All records for instance `index` of the (n, s) cell, in mechanism-major
// then rule order.
inline std::vector<RunRecord> run_instance(const BipartiteGraph& graph,
                                           const HarnessConfig& cfg,
                                           std::size_t n, double s,
                                           std::size_t index) {
  ExperimentConfig ec;
  ec.n = n;
  ec.s = s;
  ec.seed = cfg.seed;
  ec.set_nodes = cfg.set_nodes;
  ec.vertex_value = cfg.vertex_value;
  ec.base_cost = cfg.base_cost;
  const GeneratedInstance inst = build_instance(graph, ec, index);
  const auto base = std::make_shared<const CoverageOracle>(inst.coverage);
  const double af = active_fraction(*base, inst.costs);
  const std::uint64_t seed = hash_combine(cfg.seed, index);

  std::vector<RunRecord> out;
  for (MechanismKind mech : cfg.mechanisms) {
    std::vector<std::optional<RuleKind>> rules;
    if (uses_rule(mech)) {
      rules.assign(cfg.rules.begin(), cfg.rules.end());
    } else {
      rules.push_back(std::nullopt);
    }
    for (const auto& kind : rules) {
      RunRecord r;
      r.instance = index;
      r.n = n;
      r.s = s;
      r.active_fraction = af;
      r.mechanism = std::string(mechanism_name(mech));
      r.rule = kind ? std::string(rule_name(*kind)) : "-";
      r.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      const auto run =
          detail::RunCell(mech, kind.value_or(RuleKind::kGreedyMargin), cfg,
                          base, inst.costs, seed, r.reason);
      r.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      if (!run) {
        r.skipped = true;
      } else {
        r.welfare = welfare(*base, inst.costs, run->winners);
        const double check =
            recompute_welfare(*inst.coverage, inst.costs, run->winners);
        if (std::abs(check - r.welfare) >
            1e-9 * std::max(1.0, std::abs(check))) {
          throw InternalError("welfare recomputation mismatch on " +
                              record_key(r));
        }
        r.surplus = run->surplus;
        r.total_payment = run->total_payment;
        r.winner_count = run->winners.size();
        r.oracle_queries = run->queries;
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

// One record per (n, s, instance, mechanism, rule), ordered by that key.
inline std::vector<RunRecord> run_experiment(const BipartiteGraph& graph,
                                             const HarnessConfig& cfg) {
  struct Task {
    std::size_t n;
    double s;
    std::size_t index;
  };
  std::vector<Task> tasks;
  for (std::size_t n : cfg.n) {
    for (double s : cfg.s) {
      for (std::size_t i = 0; i < cfg.instances; ++i) tasks.push_back({n, s, i});
    }
  }
  std::vector<std::vector<RunRecord>> results(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t t) {
    results[t] = run_instance(graph, cfg, tasks[t].n, tasks[t].s, tasks[t].index);
  });
  std::vector<RunRecord> records;
  for (auto& r : results) {
    for (auto& x : r) records.push_back(std::move(x));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Summary.

// Spearman rank correlation with average ranks for ties; 0 if either
// sample is constant.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("spearman: length mismatch");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double m = static_cast<double>(x.size());
  if (m < 2) return 0.0;
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / m;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / m;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

struct BucketStat {
  std::size_t n = 0;
  std::string mechanism;
  std::string rule;
  int bucket = 0;  // active fraction in [bucket/10, (bucket+1)/10)
  std::size_t count = 0;
  double mean_welfare = 0.0;
  double std_welfare = 0.0;
};

struct OrderingCheck {
  std::size_t n = 0;
  std::string mechanism;
  std::size_t buckets = 0;  // buckets where every ranked rule has records
  std::size_t holding = 0;  // of those, buckets where the ordering holds
  bool pass() const { return buckets > 0 && 3 * holding >= 2 * buckets; }
};

struct ExperimentSummary {
  std::vector<BucketStat> buckets;
  std::map<std::size_t, double> spearman_s_vs_active;  // by n
  std::vector<OrderingCheck> ordering;
};

inline int active_bucket(double fraction) {
  return std::clamp(static_cast<int>(std::floor(fraction * 10.0)), 0, 9);
}

// The ordering greedy-margin >= greedy-rate >= cost-scaled >= distorted of
// mean welfare, checked per active-fraction bucket.
inline ExperimentSummary summarize(const std::vector<RunRecord>& records) {
  ExperimentSummary sum;
  using Key = std::tuple<std::size_t, std::string, std::string, int>;
  std::map<Key, std::vector<double>> groups;
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>>
      s_af;
  std::map<std::tuple<std::size_t, double, std::size_t>, bool> seen;
  for (const RunRecord& r : records) {
    if (!seen[{r.n, r.s, r.instance}]) {
      seen[{r.n, r.s, r.instance}] = true;
      s_af[r.n].first.push_back(r.s);
      s_af[r.n].second.push_back(r.active_fraction);
    }
    if (r.skipped) continue;
    groups[{r.n, r.mechanism, r.rule, active_bucket(r.active_fraction)}]
        .push_back(r.welfare);
  }
  for (const auto& [key, w] : groups) {
    BucketStat b;
    std::tie(b.n, b.mechanism, b.rule, b.bucket) = key;
    b.count = w.size();
    b.mean_welfare =
        std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double var = 0.0;
    for (double x : w) var += (x - b.mean_welfare) * (x - b.mean_welfare);
    b.std_welfare =
        w.size() > 1 ? std::sqrt(var / static_cast<double>(w.size() - 1)) : 0.0;
    sum.buckets.push_back(b);
  }
  for (const auto& [n, v] : s_af) {
    sum.spearman_s_vs_active[n] = spearman(v.first, v.second);
  }

  const std::array<std::string, 4> ranked = {"greedy-margin", "greedy-rate",
                                             "cost-scaled", "distorted"};
  std::map<std::pair<std::size_t, std::string>, OrderingCheck> checks;
  std::map<std::tuple<std::size_t, std::string, int>,
           std::map<std::string, double>>
      means;
  for (const BucketStat& b : sum.buckets) {
    means[{b.n, b.mechanism, b.bucket}][b.rule] = b.mean_welfare;
  }
  for (const auto& [key, by_rule] : means) {
    const auto& [n, mech, bucket] = key;
    if (!std::all_of(ranked.begin(), ranked.end(), [&](const std::string& r) {
          return by_rule.count(r) > 0;
        })) {
      continue;
    }
    OrderingCheck& c = checks[{n, mech}];
    c.n = n;
    c.mechanism = mech;
    ++c.buckets;
    bool holds = true;
    for (std::size_t k = 0; k + 1 < ranked.size(); ++k) {
      holds = holds && by_rule.at(ranked[k]) >= by_rule.at(ranked[k + 1]);
    }
    if (holds) ++c.holding;
  }
  for (auto& [_, c] : checks) sum.ordering.push_back(c);
  return sum;
}

inline void write_summary_csv(std::ostream& out, const ExperimentSummary& sum) {
  out << kSchemaLine << "\n"
      << "n,mechanism,rule,active_lo,active_hi,count,mean_welfare,std_welfare\n";
  for (const BucketStat& b : sum.buckets) {
    out << b.n << ',' << b.mechanism << ',' << b.rule << ','
        << format_real(b.bucket / 10.0) << ','
        << format_real((b.bucket + 1) / 10.0) << ',' << b.count << ','
        << format_real(b.mean_welfare) << ',' << format_real(b.std_welfare)
        << '\n';
  }
}

inline void print_summary(std::ostream& out, const ExperimentSummary& sum) {
  for (const auto& [n, rho] : sum.spearman_s_vs_active) {
    out << "n=" << n << " spearman(s, active_fraction)=" << format_real(rho)
        << "\n";
  }
  for (const OrderingCheck& c : sum.ordering) {
    out << "n=" << c.n << " " << c.mechanism << " welfare ordering holds in "
        << c.holding << "/" << c.buckets << " buckets"
        << (c.pass() ? "" : " (warning)") << "\n";
  }
}

// ---------------------------------------------------------------------------
// Benchmark.

struct BenchRecord {
  std::size_t n = 0;
  std::string mechanism;
  std::string rule;
  std::string variant;  // naive | lazy | exact
  bool skipped = false;
  std::string reason;
  double wall_ms = 0.0;
  std::uint64_t oracle_queries = 0;
};

// Per n: naive and lazy allocation for every diminishing-return rule in
// the config, the full mechanisms up to bench_payment_max_n, and VCG up to
// its exhaustive cap. Uses instance 0 at the first s value.
inline std::vector<BenchRecord> run_bench(const BipartiteGraph& graph,
                                          const HarnessConfig& cfg) {
  std::vector<BenchRecord> out;
  for (std::size_t n : cfg.n) {
    ExperimentConfig ec;
    ec.n = n;
    ec.s = cfg.s.front();
    ec.seed = cfg.seed;
    ec.set_nodes = cfg.set_nodes;
    ec.vertex_value = cfg.vertex_value;
    ec.base_cost = cfg.base_cost;
    const GeneratedInstance inst = build_instance(graph, ec, 0);
    const CoverageOracle oracle(inst.coverage);
    auto timed = [&](BenchRecord r, auto&& fn) {
      const auto t0 = std::chrono::steady_clock::now();
      r.oracle_queries = fn();
      r.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      out.push_back(std::move(r));
    };
    for (RuleKind kind : cfg.rules) {
      const ScoringRule rule = ScoringRule::Of(kind);
      if (!rule.diminishing_return()) continue;
      BenchRecord r;
      r.n = n;
      r.rule = std::string(rule.name());
      r.mechanism = "allocation";
      r.variant = "naive";
      timed(r, [&] { return run_meta(rule, oracle, inst.costs).oracle_queries; });
      r.variant = "lazy";
      timed(r, [&] {
        return run_meta_lazy(rule, oracle, inst.costs).oracle_queries;
      });
      r.mechanism = "sealed-bid";
      if (n > cfg.bench_payment_max_n) {
        r.skipped = true;
        r.reason = "payments skipped above n=" +
                   std::to_string(cfg.bench_payment_max_n);
        r.variant = "naive";
        out.push_back(r);
        r.variant = "lazy";
        out.push_back(r);
        continue;
      }
      r.variant = "naive";
      timed(r, [&] {
        return run_sealed_bid(rule, oracle, inst.costs).oracle_queries;
      });
      r.variant = "lazy";
      timed(r, [&] {
        return run_sealed_bid_lazy(rule, oracle, inst.costs).oracle_queries;
      });
    }
    BenchRecord v;
    v.n = n;
    v.mechanism = "vcg";
    v.rule = "-";
    v.variant = "exact";
    if (n > cfg.vcg_max_n) {
      v.skipped = true;
      v.reason = "n=" + std::to_string(n) + " exceeds the exhaustive cap " +
                 std::to_string(cfg.vcg_max_n);
      out.push_back(v);
    } else {
      ExactOptimizerConfig xc;
      xc.max_exhaustive_n = cfg.vcg_max_n;
      timed(v, [&] { return run_vcg(oracle, inst.costs, xc).oracle_queries; });
    }
  }
  return out;
}

inline void write_bench_csv(std::ostream& out,
                            const std::vector<BenchRecord>& records) {
  out << kSchemaLine << "\n"
      << "n,mechanism,rule,variant,status,reason,wall_ms,oracle_queries\n";
  for (const BenchRecord& r : records) {
    out << r.n << ',' << r.mechanism << ',' << r.rule << ',' << r.variant
        << ',' << (r.skipped ? "skipped" : "ok") << ',' << r.reason << ','
        << format_real(r.wall_ms) << ',' << r.oracle_queries << '\n';
  }
}

}  // namespace procauction
