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

// Sealed-bid mechanisms: greedy allocation with critical-bid payments, its
// lazy variant, and VCG on top of the exact optimizer.

#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/exact_optimizer.hpp"
#include "procauction/random.hpp"
#include "procauction/scoring.hpp"
#include "procauction/selection.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

struct AuctionOutcome {
  SellerSet winners;
  std::vector<double> payments;  // 0 for losers
  SelectionTrace trace;          // empty for mechanisms without one
  double auctioneer_surplus = 0.0;
  std::uint64_t oracle_queries = 0;

  double total_payment() const {
    double total = 0.0;
    for (SellerId i : winners) total += payments[i];
    return total;
  }
};

inline void finalize_outcome(AuctionOutcome& out,
                             const ValuationOracle& oracle) {
  out.auctioneer_surplus = oracle.value(out.winners) - out.total_payment();
}

struct SealedBidOptions {
  // Start each payment re-run at the winner's admission round instead of
  // round 1. Earlier rounds of the re-run coincide with the allocation run
  // and never raise the critical bid above the winner's own bid.
  bool reuse_prefix = true;
  // Debug only: the two independent max-updates of the payment pseudocode
  // instead of the conjunction z_k* = sup{z : argmax and positive}. Implies a
  // full re-run.
  bool separate_max_updates = false;
  // Compute payments only for this seller (others stay 0).
  std::optional<SellerId> only_payment_for;
  // Skip candidates whose stale score cannot lead a round, in the
  // allocation and every payment re-run. Same outcome on submodular
  // oracles, fewer queries.
  bool bound_pruning = false;
};

namespace detail {

inline bool SkipPayment(const SealedBidOptions& opt, SellerId i) {
  return opt.only_payment_for && *opt.only_payment_for != i;
}

// Critical bid of winner i admitted in round `admitted`, via a re-run with
// i excluded.
inline double NaivePayment(const ScoringRule& rule,
                           const ValuationOracle& oracle,
                           std::span<const double> bids, RandomSeed seed,
                           const SelectionTrace& trace, SellerId i,
                           std::size_t admitted, const SealedBidOptions& opt) {
  const std::size_t rounds = trace.rounds();
  RuleEvaluator ev(rule, oracle, seed);
  ev.set_bound_pruning(opt.bound_pruning);
  std::size_t first = 1;
  const bool separate = opt.separate_max_updates;
  if (opt.reuse_prefix && !separate) {
    ev.Restore(std::span(trace.tentative_sets).subspan(0, admitted));
    first = admitted;
  }
  double p = 0.0;
  NaiveRounds(ev, bids, i, first, rounds, nullptr,
              [&](std::size_t k, const RoundLeaders& leaders) {
                const RuleInputs in = ev.Inputs(i, k);
                const double pos = scoring::PositiveThreshold(rule.kind, in);
                const double arg = scoring::ArgmaxThreshold(
                    rule.kind, in,
                    leaders.best ? leaders.best_score : -kInfinity);
                if (separate) {
                  p = std::max({p, pos, arg});
                } else {
                  p = std::max(p, std::min(pos, arg));
                }
              });
  return p;
}

// Lazy critical bid: continue greedy on N \ S_k from T = S_{k-1} and take
// the sup of bids at which i would beat each admitted competitor while
// staying positive; once the continuation stops, add i's positive threshold
// at the final set, which covers every remaining round.
inline double LazyPayment(const ScoringRule& rule,
                          const ValuationOracle& oracle,
                          std::span<const double> bids, RandomSeed seed,
                          const SelectionTrace& trace, SellerId i,
                          std::size_t admitted) {
  const std::size_t rounds = trace.rounds();
  RuleEvaluator ev(rule, oracle, seed);
  ev.Restore(std::span(trace.tentative_sets).subspan(0, admitted));
  double p = 0.0;
  const std::size_t stop = LazyRounds(
      ev, bids, i, admitted, rounds, nullptr,
      [&](std::size_t k, SellerId, double competitor) {
        const RuleInputs in = ev.Inputs(i, k);
        p = std::max(p, std::min(scoring::PositiveThreshold(rule.kind, in),
                                 scoring::ArgmaxThreshold(rule.kind, in,
                                                          competitor)));
      });
  if (stop <= rounds) {
    p = std::max(p, scoring::PositiveThreshold(rule.kind, ev.Inputs(i, stop)));
  }
  return p;
}

}  // namespace detail

// Greedy allocation with critical-bid payments. The seed is shared by the
// allocation run and every payment re-run.
inline AuctionOutcome run_sealed_bid(const ScoringRule& rule,
                                     const ValuationOracle& oracle,
                                     std::span<const double> bids,
                                     RandomSeed seed = {},
                                     const SealedBidOptions& opt = {}) {
  const std::uint64_t q0 = oracle.query_count();
  AuctionOutcome out;
  out.trace = run_meta(rule, oracle, bids, seed, opt.bound_pruning);
  out.winners = out.trace.winners();
  out.payments.assign(oracle.num_sellers(), 0.0);
  for (SellerId i : out.winners) {
    if (detail::SkipPayment(opt, i)) continue;
    out.payments[i] = detail::NaivePayment(rule, oracle, bids, seed, out.trace,
                                           i, *out.trace.chosen_at[i], opt);
  }
  finalize_outcome(out, oracle);
  out.oracle_queries = oracle.query_count() - q0;
  return out;
}

// Lazy allocation and lazy payments; identical outcome to run_sealed_bid
// for diminishing-return rules.
inline AuctionOutcome run_sealed_bid_lazy(const ScoringRule& rule,
                                          const ValuationOracle& oracle,
                                          std::span<const double> bids,
                                          RandomSeed seed = {},
                                          const SealedBidOptions& opt = {}) {
  const std::uint64_t q0 = oracle.query_count();
  AuctionOutcome out;
  out.trace = run_meta_lazy(rule, oracle, bids, seed);
  out.winners = out.trace.winners();
  out.payments.assign(oracle.num_sellers(), 0.0);
  for (SellerId i : out.winners) {
    if (detail::SkipPayment(opt, i)) continue;
    out.payments[i] = detail::LazyPayment(rule, oracle, bids, seed, out.trace,
                                          i, *out.trace.chosen_at[i]);
  }
  finalize_outcome(out, oracle);
  out.oracle_queries = oracle.query_count() - q0;
  return out;
}

// VCG: welfare-optimal allocation; winner i is paid
//   (f(OPT) - sum_{OPT \ {i}} b) - welfare(OPT of N \ {i}).
inline AuctionOutcome run_vcg(const ValuationOracle& oracle,
                              std::span<const double> bids,
                              const ExactOptimizerConfig& cfg = {}) {
  check_bids(oracle, bids);
  const std::uint64_t q0 = oracle.query_count();
  const std::size_t n = oracle.num_sellers();
  const OptResult opt = exact_opt(oracle, bids, cfg);
  AuctionOutcome out;
  out.winners = opt.set;
  out.payments.assign(n, 0.0);
  const double f_opt = oracle.value(opt.set);
  const SellerSet all = SellerSet::All(n);
  for (SellerId i : opt.set) {
    const double others = total_cost(bids, opt.set) - bids[i];
    const OptResult without = exact_opt_over(oracle, bids, all.without(i), cfg);
    out.payments[i] = (f_opt - others) - without.welfare;
  }
  finalize_outcome(out, oracle);
  out.oracle_queries = oracle.query_count() - q0;
  return out;
}

// ---------------------------------------------------------------------------
// Verification.

struct VerificationReport {
  std::size_t checks = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void Merge(const VerificationReport& other) {
    checks += other.checks;
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }
};

// A sealed-bid mechanism as a function of the reported bids. `focus`, when
// set, names the only seller whose payment the caller will read.
using Mechanism = std::function<AuctionOutcome(
    std::span<const double> bids, RandomSeed seed,
    std::optional<SellerId> focus)>;

inline Mechanism greedy_mechanism(const ScoringRule& rule,
                                  const ValuationOracle& oracle,
                                  bool lazy = false) {
  return [rule, &oracle, lazy](std::span<const double> bids, RandomSeed seed,
                               std::optional<SellerId> focus) {
    SealedBidOptions opt;
    opt.only_payment_for = focus;
    return lazy ? run_sealed_bid_lazy(rule, oracle, bids, seed, opt)
                : run_sealed_bid(rule, oracle, bids, seed, opt);
  };
}

inline Mechanism vcg_mechanism(const ValuationOracle& oracle,
                               ExactOptimizerConfig cfg = {}) {
  return [&oracle, cfg](std::span<const double> bids, RandomSeed,
                        std::optional<SellerId>) {
    return run_vcg(oracle, bids, cfg);
  };
}

inline double utility(const AuctionOutcome& out, SellerId i, double cost) {
  return out.winners.contains(i) ? out.payments[i] - cost : 0.0;
}

// For every seller and each of `grid` deviations spread evenly over
// [0, 2 f(i | empty)], truthful utility must be at least the deviating
// utility minus 1e-9. All runs share `seed`.
inline VerificationReport verify_ic(const Mechanism& mechanism,
                                    const ValuationOracle& oracle,
                                    std::span<const double> costs,
                                    std::size_t grid, RandomSeed seed = {}) {
  VerificationReport report;
  const std::size_t n = oracle.num_sellers();
  std::vector<double> bids(costs.begin(), costs.end());
  for (SellerId i = 0; i < n; ++i) {
    const double truthful = utility(mechanism(bids, seed, i), i, costs[i]);
    const double top = 2.0 * oracle.marginal(i, {});
    for (std::size_t j = 0; j < grid; ++j) {
      const double dev =
          grid == 1 ? 0.0
                    : top * static_cast<double>(j) / static_cast<double>(grid - 1);
      bids[i] = dev;
      const double u = utility(mechanism(bids, seed, i), i, costs[i]);
      ++report.checks;
      if (truthful < u - 1e-9) {
        report.violations.push_back(
            "seller " + std::to_string(i) + " cost " +
            std::to_string(costs[i]) + ": bidding " + std::to_string(dev) +
            " yields utility " + std::to_string(u) + " > truthful " +
            std::to_string(truthful));
      }
    }
    bids[i] = costs[i];
  }
  return report;
}

// Individual rationality at the reported bids.
inline VerificationReport verify_ir(const AuctionOutcome& out,
                                    std::span<const double> bids) {
  VerificationReport report;
  for (SellerId i : out.winners) {
    ++report.checks;
    if (out.payments[i] < bids[i] - 1e-9) {
      report.violations.push_back("winner " + std::to_string(i) + " paid " +
                                  std::to_string(out.payments[i]) +
                                  " below bid " + std::to_string(bids[i]));
    }
  }
  return report;
}

// f(winners) >= total payment - 1e-9.
inline bool verify_nas(const AuctionOutcome& out,
                       const ValuationOracle& oracle) {
  return oracle.value(out.winners) >= out.total_payment() - 1e-9;
}

}  // namespace procauction
