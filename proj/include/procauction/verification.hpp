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

// Randomized property suites over the mechanisms: incentive compatibility,
// individual rationality, surplus, welfare guarantees against the exact
// optimum, and equivalence of the fast and reference implementations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

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

struct SuiteReport {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool ok() const { return failures.empty(); }

  void Fail(std::string what) {
    // Keep reports readable when a suite fails everywhere.
    if (failures.size() < 50) failures.push_back(std::move(what));
    ++failure_count_;
  }
  std::size_t failure_count() const { return failure_count_; }

 private:
  std::size_t failure_count_ = 0;
};

// A random coverage instance with n drawn uniformly from [min_n, max_n].
struct SampledInstance {
  std::shared_ptr<const CoverageOracle> oracle;
  std::vector<double> costs;
  std::uint64_t seed = 0;
};

inline SampledInstance sample_instance(std::size_t min_n, std::size_t max_n,
                                       std::uint64_t seed) {
  const std::uint64_t h = splitmix64(seed);
  const std::size_t n = min_n + static_cast<std::size_t>(h % (max_n - min_n + 1));
  RandomInstance r = random_instance(n, seed);
  return SampledInstance{std::make_shared<const CoverageOracle>(r.coverage),
                         std::move(r.costs), seed};
}

// Rule together with the oracle it runs against: the noisy rule sees a
// NoisyOracle around the instance.
struct RuleSetup {
  ScoringRule rule;
  std::shared_ptr<const ValuationOracle> oracle;
};

inline RuleSetup setup_rule(RuleKind kind,
                            std::shared_ptr<const ValuationOracle> base,
                            std::uint64_t seed, double noise_epsilon = 0.05) {
  if (kind == RuleKind::kNoisyDistortedGreedy) {
    return RuleSetup{ScoringRule::Noisy(noise_epsilon),
                     std::make_shared<const NoisyOracle>(base, noise_epsilon,
                                                         seed)};
  }
  return RuleSetup{ScoringRule::Of(kind), std::move(base)};
}

inline std::string describe(const SampledInstance& inst) {
  return "instance seed " + std::to_string(inst.seed) + " (n=" +
         std::to_string(inst.costs.size()) + ")";
}

// ---------------------------------------------------------------------------
// Sealed-bid feasibility.

struct FeasibilityOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 7;
  std::size_t max_n = 10;
  std::size_t grid = 20;
  std::vector<RuleKind> rules{kAllRuleKinds.begin(), kAllRuleKinds.end()};
  bool check_ic = true;
  bool check_ir = true;
  bool check_nas = true;
  // Replace the payment rule by pay-your-bid, a known non-IC control.
  bool first_price_fixture = false;
};

inline Mechanism first_price_mechanism(const ScoringRule& rule,
                                       const ValuationOracle& oracle) {
  return [rule, &oracle](std::span<const double> bids, RandomSeed seed,
                         std::optional<SellerId>) {
    AuctionOutcome out;
    out.trace = run_meta(rule, oracle, bids, seed);
    out.winners = out.trace.winners();
    out.payments.assign(bids.size(), 0.0);
    for (SellerId i : out.winners) out.payments[i] = bids[i];
    finalize_outcome(out, oracle);
    return out;
  };
}

inline SuiteReport feasibility_suite(const FeasibilityOptions& opt) {
  SuiteReport report;
  report.name = "feasibility";
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    for (RuleKind kind : opt.rules) {
      const RuleSetup setup = setup_rule(kind, inst.oracle, inst.seed);
      const ValuationOracle& oracle = *setup.oracle;
      const RandomSeed seed(hash_combine(inst.seed, 0x5eedULL));
      const Mechanism mech = opt.first_price_fixture
                                 ? first_price_mechanism(setup.rule, oracle)
                                 : greedy_mechanism(setup.rule, oracle);
      const std::string where =
          describe(inst) + " rule " + std::string(setup.rule.name());
      if (opt.check_ic) {
        const VerificationReport ic =
            verify_ic(mech, oracle, inst.costs, opt.grid, seed);
        report.checks += ic.checks;
        for (const auto& v : ic.violations) report.Fail("IC " + where + ": " + v);
      }
      if (opt.check_ir || opt.check_nas) {
        const AuctionOutcome out = mech(inst.costs, seed, std::nullopt);
        if (opt.check_ir) {
          const VerificationReport ir = verify_ir(out, inst.costs);
          report.checks += ir.checks;
          for (const auto& v : ir.violations) {
            report.Fail("IR " + where + ": " + v);
          }
        }
        if (opt.check_nas) {
          ++report.checks;
          if (!verify_nas(out, oracle)) {
            report.Fail("NAS " + where + ": f(winners)=" +
                        std::to_string(oracle.value(out.winners)) +
                        " < payments " + std::to_string(out.total_payment()));
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Critical bids by bisection on the allocation rule.

struct CriticalBidOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 11;
  std::size_t max_n = 10;
  double tolerance = 1e-6;
  std::vector<RuleKind> rules{kAllRuleKinds.begin(), kAllRuleKinds.end()};
};

// sup{z : i wins at bid z} located by 60 bisection steps on
// [b_i, f(i | empty) + 1].
inline double bisect_critical_bid(const ScoringRule& rule,
                                  const ValuationOracle& oracle,
                                  std::vector<double> bids, SellerId i,
                                  RandomSeed seed) {
  auto wins = [&](double z) {
    bids[i] = z;
    return run_meta(rule, oracle, bids, seed).winners().contains(i);
  };
  double lo = bids[i];
  double hi = oracle.marginal(i, {}) + 1.0;
  if (!wins(lo)) return lo;
  if (wins(hi)) return hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (wins(mid) ? lo : hi) = mid;
  }
  return lo;
}

inline SuiteReport critical_bid_suite(const CriticalBidOptions& opt) {
  SuiteReport report;
  report.name = "critical-bid";
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    for (RuleKind kind : opt.rules) {
      const RuleSetup setup = setup_rule(kind, inst.oracle, inst.seed);
      const RandomSeed seed(hash_combine(inst.seed, 0x5eedULL));
      const AuctionOutcome out =
          run_sealed_bid(setup.rule, *setup.oracle, inst.costs, seed);
      for (SellerId i : out.winners) {
        ++report.checks;
        const double p = out.payments[i];
        const double crit =
            bisect_critical_bid(setup.rule, *setup.oracle, inst.costs, i, seed);
        const std::string where = describe(inst) + " rule " +
                                  std::string(setup.rule.name()) + " seller " +
                                  std::to_string(i);
        if (std::abs(p - crit) > opt.tolerance) {
          report.Fail(where + ": payment " + std::to_string(p) +
                      " vs bisection " + std::to_string(crit));
        }
        std::vector<double> bids = inst.costs;
        bids[i] = p + opt.tolerance;
        if (run_meta(setup.rule, *setup.oracle, bids, seed)
                .winners()
                .contains(i)) {
          report.Fail(where + ": still wins above the payment");
        }
        if (p > opt.tolerance) {
          bids[i] = p - opt.tolerance;
          if (!run_meta(setup.rule, *setup.oracle, bids, seed)
                   .winners()
                   .contains(i)) {
            report.Fail(where + ": loses below the payment");
          }
        }
        // Telescoping bound: p_i <= f(i | S_{k-1}) at the admission round.
        const SellerSet& before =
            out.trace.tentative_sets[*out.trace.chosen_at[i] - 1];
        const double f_adm = setup.oracle->marginal(i, before);
        if (setup.rule.kind != RuleKind::kNoisyDistortedGreedy &&
            p > f_adm + 1e-9) {
          report.Fail(where + ": payment exceeds admission marginal");
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Welfare guarantees against the exact optimum.

struct GuaranteeReport {
  std::string rule;
  std::uint64_t instance = 0;
  double f_opt = 0.0;
  double c_opt = 0.0;
  double achieved = 0.0;  // f(S) - c(S)
  std::vector<double> margins;  // achieved - bound, one per bound checked

  bool pass() const {
    return std::all_of(margins.begin(), margins.end(),
                       [](double m) { return m >= -1e-9; });
  }
};

inline std::vector<double> beta_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 20; ++j) g.push_back(0.05 * j);
  return g;
}

struct GuaranteeOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 7;
  std::size_t max_n = 12;
  std::vector<double> noise_levels{0.01, 0.05};
  double noisy_tolerance = 1e-7;
};

struct GuaranteeSuiteResult {
  SuiteReport report;
  std::vector<GuaranteeReport> rows;
  // Smallest margin per beta for the distorted rule.
  std::vector<double> distorted_min_margin;
};

inline GuaranteeSuiteResult guarantee_suite(const GuaranteeOptions& opt) {
  GuaranteeSuiteResult res;
  res.report.name = "guarantees";
  const auto betas = beta_grid();
  res.distorted_min_margin.assign(betas.size(), kInfinity);
  std::size_t roi_checked = 0;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    const ValuationOracle& f = *inst.oracle;
    const std::size_t n = inst.costs.size();
    const OptResult best = exact_opt(f, inst.costs);
    const double f_opt = f.value(best.set);
    const double c_opt = total_cost(inst.costs, best.set);
    auto row = [&](const std::string& rule, const SellerSet& s) {
      GuaranteeReport r;
      r.rule = rule;
      r.instance = inst.seed;
      r.f_opt = f_opt;
      r.c_opt = c_opt;
      r.achieved = welfare(f, inst.costs, s);
      return r;
    };
    auto record = [&](GuaranteeReport r, double tol) {
      ++res.report.checks;
      for (double m : r.margins) {
        if (m < -tol) {
          res.report.Fail(r.rule + " " + describe(inst) + ": margin " +
                          std::to_string(m));
          break;
        }
      }
      res.rows.push_back(std::move(r));
    };

    {  // distorted greedy, every beta
      const auto s = run_meta(ScoringRule::Of(RuleKind::kDistortedGreedy), f,
                              inst.costs)
                         .winners();
      GuaranteeReport r = row("distorted", s);
      for (std::size_t b = 0; b < betas.size(); ++b) {
        const double beta = betas[b];
        const double bound = (1.0 - std::exp(-beta)) * f_opt -
                             (beta + 1.0 / static_cast<double>(n)) * c_opt;
        r.margins.push_back(r.achieved - bound);
        res.distorted_min_margin[b] =
            std::min(res.distorted_min_margin[b], r.achieved - bound);
      }
      record(std::move(r), 1e-9);
    }
    {  // cost-scaled greedy: (1/2, 1)
      const auto s =
          run_meta(ScoringRule::Of(RuleKind::kCostScaled), f, inst.costs)
              .winners();
      GuaranteeReport r = row("cost-scaled", s);
      r.margins.push_back(r.achieved - (0.5 * f_opt - c_opt));
      record(std::move(r), 1e-9);
    }
    if (f_opt >= c_opt && c_opt > 0.0) {  // ROI greedy
      ++roi_checked;
      const auto s =
          run_meta(ScoringRule::Of(RuleKind::kRoiGreedy), f, inst.costs)
              .winners();
      GuaranteeReport r = row("roi", s);
      r.margins.push_back(r.achieved -
                          (f_opt - (1.0 + std::log(f_opt / c_opt)) * c_opt));
      record(std::move(r), 1e-9);
    }
    for (double eps : opt.noise_levels) {  // noisy distorted greedy
      const RuleSetup setup =
          setup_rule(RuleKind::kNoisyDistortedGreedy, inst.oracle, inst.seed, eps);
      const auto s = run_meta(setup.rule, *setup.oracle, inst.costs).winners();
      GuaranteeReport r = row("noisy-distorted(eps=" + std::to_string(eps) + ")", s);
      const double x = setup.rule.noisy_cost_multiplier(n);
      const double bound =
          (1.0 - eps) / x * (1.0 - std::exp(-1.0)) * f_opt - c_opt;
      r.margins.push_back(r.achieved - bound);
      record(std::move(r), opt.noisy_tolerance);
    }
  }
  res.report.notes.push_back("roi bound applied on " +
                             std::to_string(roi_checked) + " instances");
  return res;
}

struct StochasticOptions {
  std::size_t instances = 50;
  std::size_t seeds = 200;
  std::uint64_t seed = 7;
  std::size_t max_n = 12;
  double sample_epsilon = 0.1;
  double tolerated_failure_rate = 0.05;
};

// Mean welfare over `seeds` runs against the expectation bound with a
// two-standard-error allowance; the suite passes if the share of failing
// instances is at most the tolerated rate.
inline SuiteReport stochastic_guarantee_suite(const StochasticOptions& opt) {
  SuiteReport report;
  report.name = "stochastic-guarantee";
  const auto betas = beta_grid();
  std::size_t failing = 0;
  ScoringRule rule = ScoringRule::Of(RuleKind::kStochasticDistortedGreedy);
  rule.sample_epsilon = opt.sample_epsilon;
  for (std::size_t t = 0; t < opt.instances; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    const ValuationOracle& f = *inst.oracle;
    const double n = static_cast<double>(inst.costs.size());
    const OptResult best = exact_opt(f, inst.costs);
    const double f_opt = f.value(best.set);
    const double c_opt = total_cost(inst.costs, best.set);
    std::vector<double> w(opt.seeds);
    for (std::size_t r = 0; r < opt.seeds; ++r) {
      const RandomSeed seed(hash_combine(inst.seed, r));
      w[r] = welfare(f, inst.costs, run_meta(rule, f, inst.costs, seed).winners());
    }
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) /
                        static_cast<double>(w.size());
    double var = 0.0;
    for (double x : w) var += (x - mean) * (x - mean);
    const double sd = w.size() > 1
                          ? std::sqrt(var / static_cast<double>(w.size() - 1))
                          : 0.0;
    const double allowance =
        2.0 * sd / std::sqrt(static_cast<double>(opt.seeds));
    ++report.checks;
    for (double beta : betas) {
      const double bound = (1.0 - opt.sample_epsilon) *
                               (1.0 - std::exp(-beta)) * f_opt -
                           (beta + 1.0 / n) * c_opt - allowance;
      if (mean < bound - 1e-9) {
        ++failing;
        report.notes.push_back(describe(inst) + ": mean " +
                               std::to_string(mean) + " below bound " +
                               std::to_string(bound) + " at beta " +
                               std::to_string(beta));
        break;
      }
    }
  }
  const double rate =
      static_cast<double>(failing) / static_cast<double>(opt.instances);
  report.notes.push_back("failing instances: " + std::to_string(failing) +
                         "/" + std::to_string(opt.instances));
  if (rate > opt.tolerated_failure_rate) {
    report.Fail("failure rate " + std::to_string(rate) + " exceeds " +
                std::to_string(opt.tolerated_failure_rate));
  }
  return report;
}

// ---------------------------------------------------------------------------
// VCG.

struct VcgOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 7;
  std::size_t max_n = 12;
};

inline SuiteReport vcg_suite(const VcgOptions& opt) {
  SuiteReport report;
  report.name = "vcg";
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    const ValuationOracle& f = *inst.oracle;
    const AuctionOutcome out = run_vcg(f, inst.costs);
    const OptResult best = exact_opt(f, inst.costs);
    report.checks += 3;
    if (welfare(f, inst.costs, out.winners) != best.welfare) {
      report.Fail(describe(inst) + ": VCG welfare differs from the optimum");
    }
    if (!verify_nas(out, f)) {
      report.Fail(describe(inst) + ": payments exceed f(winners)");
    }
    if (!verify_ir(out, inst.costs).ok()) {
      report.Fail(describe(inst) + ": winner paid below cost");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Lazy versus naive.

struct LazyOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 7;
  std::size_t max_n = 30;
};

inline std::vector<RuleKind> diminishing_rules() {
  std::vector<RuleKind> out;
  for (RuleKind k : kAllRuleKinds) {
    if (ScoringRule::Of(k).diminishing_return()) out.push_back(k);
  }
  return out;
}

inline SuiteReport lazy_equivalence_suite(const LazyOptions& opt) {
  SuiteReport report;
  report.name = "lazy-equivalence";
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    for (RuleKind kind : diminishing_rules()) {
      const ScoringRule rule = ScoringRule::Of(kind);
      const AuctionOutcome a = run_sealed_bid(rule, *inst.oracle, inst.costs);
      const AuctionOutcome b =
          run_sealed_bid_lazy(rule, *inst.oracle, inst.costs);
      report.checks += 3;
      const std::string where =
          describe(inst) + " rule " + std::string(rule.name());
      if (a.winners != b.winners) report.Fail(where + ": winners differ");
      if (a.trace.chosen_at != b.trace.chosen_at) {
        report.Fail(where + ": admission rounds differ");
      }
      if (a.payments != b.payments) report.Fail(where + ": payments differ");
    }
  }
  return report;
}

struct QueryComparison {
  std::string rule;
  std::uint64_t naive = 0;
  std::uint64_t lazy = 0;
};

// Oracle queries of the naive and lazy allocation loops on one instance.
inline std::vector<QueryComparison> compare_queries(
    const ValuationOracle& oracle, std::span<const double> costs) {
  std::vector<QueryComparison> out;
  for (RuleKind kind : diminishing_rules()) {
    const ScoringRule rule = ScoringRule::Of(kind);
    QueryComparison q;
    q.rule = std::string(rule.name());
    q.naive = run_meta(rule, oracle, costs).oracle_queries;
    q.lazy = run_meta_lazy(rule, oracle, costs).oracle_queries;
    out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Online mechanisms.

struct OnlineOptions {
  std::size_t pairs = 500;
  std::uint64_t seed = 7;
  std::size_t max_n = 12;
  std::size_t guarantee_instances = 200;
  std::size_t orders_per_instance = 50;
};

// Identity, reverse, a worst-of-sampled order and random orders.
inline std::vector<ArrivalOrder> adversarial_orders(
    const ScoringRule& rule, const ValuationOracle& oracle,
    std::span<const double> costs, std::size_t count, std::uint64_t seed) {
  const std::size_t n = oracle.num_sellers();
  std::vector<ArrivalOrder> orders;
  orders.push_back(ArrivalOrder::Identity(n));
  orders.push_back(ArrivalOrder::Reverse(n));
  orders.push_back(worst_of_orders(rule, oracle, costs, 64, seed));
  for (std::uint64_t r = 0; orders.size() < count; ++r) {
    orders.push_back(ArrivalOrder::Random(n, hash_combine(seed, r + 1000)));
  }
  orders.resize(std::min(orders.size(), std::max<std::size_t>(count, 1)));
  return orders;
}

inline SuiteReport online_suite(const OnlineOptions& opt) {
  SuiteReport report;
  report.name = "online-equivalence";
  std::vector<RuleKind> online;
  for (RuleKind k : kAllRuleKinds) {
    if (ScoringRule::Of(k).online_capable()) online.push_back(k);
  }
  for (std::size_t t = 0; t < opt.pairs; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    const ValuationOracle& f = *inst.oracle;
    const std::size_t n = inst.costs.size();
    const ArrivalOrder order =
        ArrivalOrder::Random(n, hash_combine(inst.seed, 0x0de7ULL));
    for (RuleKind kind : online) {
      const ScoringRule rule = ScoringRule::Of(kind);
      const std::string where =
          describe(inst) + " rule " + std::string(rule.name());
      const SellerSet meta = run_online_meta(rule, f, inst.costs, order);
      const PostedPriceOutcome post = run_posted_price(rule, f, inst.costs, order);
      const DescendingOutcome desc =
          run_descending_from_online(rule, f, inst.costs, order);
      report.checks += 4;
      if (meta != post.winners) report.Fail(where + ": posted-price winners differ");
      if (desc.auction.winners != post.winners ||
          desc.auction.payments != post.payments) {
        report.Fail(where + ": descending conversion differs");
      }
      if (post.total_payment() > f.value(post.winners) + 1e-9) {
        report.Fail(where + ": posted payments exceed f(winners)");
      }
      for (SellerId k = 0; k < n; ++k) {
        // Accepting is optimal: utility of the chosen response equals
        // max(0, price - cost).
        const double chosen =
            post.acceptance[k] ? post.posted_prices[k] - inst.costs[k] : 0.0;
        const double best =
            std::max(0.0, post.posted_prices[k] - inst.costs[k]);
        if (chosen < best - 1e-12 || chosen < -1e-12) {
          report.Fail(where + ": seller " + std::to_string(k) +
                      " responds suboptimally");
        }
      }
    }
  }

  const ScoringRule cs = ScoringRule::Of(RuleKind::kCostScaled);
  for (std::size_t t = 0; t < opt.guarantee_instances; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed ^ 0x9a7ULL, t));
    const ValuationOracle& f = *inst.oracle;
    const OptResult best = exact_opt(f, inst.costs);
    const double bound =
        0.5 * f.value(best.set) - total_cost(inst.costs, best.set);
    for (const ArrivalOrder& order : adversarial_orders(
             cs, f, inst.costs, opt.orders_per_instance, inst.seed)) {
      ++report.checks;
      const double w =
          welfare(f, inst.costs, run_online_meta(cs, f, inst.costs, order));
      if (w < bound - 1e-9) {
        report.Fail(describe(inst) + ": online cost-scaled welfare " +
                    std::to_string(w) + " below " + std::to_string(bound));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Descending auctions.

struct DescendingOptions {
  std::size_t instances = 200;
  std::uint64_t seed = 7;
  std::size_t max_n = 12;
  double epsilon = 0.1;
  std::size_t random_schedules = 100;
};

inline SuiteReport descending_suite(const DescendingOptions& opt) {
  SuiteReport report;
  report.name = "descending";
  for (std::size_t t = 0; t < opt.instances; ++t) {
    const SampledInstance inst =
        sample_instance(1, opt.max_n, hash_combine(opt.seed, t));
    const ValuationOracle& f = *inst.oracle;
    const double n = static_cast<double>(inst.costs.size());
    const OptResult best = exact_opt(f, inst.costs);
    const double bound = 0.5 * f.value(best.set) -
                         total_cost(inst.costs, best.set) - n * opt.epsilon;

    std::vector<std::unique_ptr<Schedule>> schedules;
    schedules.push_back(std::make_unique<LexicographicSchedule>());
    schedules.push_back(std::make_unique<RoundRobinSchedule>());
    for (std::size_t r = 0; r < opt.random_schedules; ++r) {
      schedules.push_back(
          std::make_unique<RandomSchedule>(hash_combine(inst.seed, r)));
    }
    for (auto& schedule : schedules) {
      CostScaledDemandOracle demand;
      const DescendingOutcome out =
          run_descending(f, inst.costs, demand, *schedule, opt.epsilon);
      const std::string where = describe(inst) + " schedule " + schedule->name();
      report.checks += 3;
      const double w = welfare(f, inst.costs, out.auction.winners);
      if (w < bound - 1e-9) {
        report.Fail(where + ": welfare " + std::to_string(w) + " below " +
                    std::to_string(bound));
      }
      if (!verify_ir(out.auction, inst.costs).ok()) {
        report.Fail(where + ": winner paid below cost");
      }
      double marginal_sum = 0.0;
      for (SellerId i : out.auction.winners) {
        marginal_sum += demand.admission_marginals()[i];
      }
      const double paid = out.auction.total_payment();
      if (paid > marginal_sum + 1e-9 ||
          marginal_sum > f.value(out.auction.winners) + 1e-9) {
        report.Fail(where + ": surplus chain violated");
      }
    }
  }
  return report;
}

struct LowerBoundResult {
  std::size_t L = 0;
  double epsilon = 0.0;
  double exact_welfare = 0.0;
  double cost_scaled_welfare = 0.0;
  double opt_welfare = 0.0;
  std::size_t exact_iterations = 0;
  std::size_t cost_scaled_iterations = 0;
};

// Runs the lower-bound family under the adversarial schedule with the exact
// oracle (by case analysis) and with the cost-scaled oracle.
inline LowerBoundResult lower_bound_demo(std::size_t L, double epsilon) {
  if (L == 0) throw InputError("L must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0 / static_cast<double>(L))) {
    throw InputError("epsilon must lie in (0, 1/L)");
  }
  const AdversarialFamilyOracle family(L);
  const std::vector<double> bids = family.bids();
  LowerBoundResult r;
  r.L = L;
  r.epsilon = epsilon;
  {
    AdversarialFamilyDemandOracle demand(family);
    AdversarialFamilySchedule schedule(L);
    const auto out = run_descending(family, bids, demand, schedule, epsilon);
    r.exact_welfare = welfare(family, bids, out.auction.winners);
    r.exact_iterations = out.iterations;
  }
  {
    CostScaledDemandOracle demand;
    AdversarialFamilySchedule schedule(L);
    const auto out = run_descending(family, bids, demand, schedule, epsilon);
    r.cost_scaled_welfare = welfare(family, bids, out.auction.winners);
    r.cost_scaled_iterations = out.iterations;
  }
  // The demand at prices equal to the bids is the welfare optimum.
  AdversarialFamilyDemandOracle opt(family);
  r.opt_welfare = welfare(family, bids,
                          opt.Demand(SellerSet::All(L + 2), bids, std::nullopt));
  return r;
}

}  // namespace procauction
