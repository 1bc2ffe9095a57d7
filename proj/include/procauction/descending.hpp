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

// Descending price auctions driven by a demand oracle and a schedule that
// picks which undemanded seller's price drops next.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/exact_optimizer.hpp"
#include "procauction/online.hpp"
#include "procauction/random.hpp"
#include "procauction/scoring.hpp"
#include "procauction/sealed_bid.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

// D(S, p): a subset of the active set S the buyer would purchase at p.
class DemandOracle {
 public:
  virtual ~DemandOracle() = default;

  // Called once when an auction run starts.
  virtual void BeginRun(const ValuationOracle& oracle) { (void)oracle; }

  // `previous` is the seller whose price the schedule lowered in the
  // preceding iteration, if any.
  virtual SellerSet Demand(const SellerSet& active,
                           std::span<const double> prices,
                           std::optional<SellerId> previous) = 0;

  virtual std::string name() const = 0;
};

// Exact welfare maximizer over the active set (branch and bound).
class ExactDemandOracle final : public DemandOracle {
 public:
  explicit ExactDemandOracle(const ValuationOracle& oracle,
                             ExactOptimizerConfig cfg = {})
      : oracle_(oracle), cfg_(cfg) {}

  SellerSet Demand(const SellerSet& active, std::span<const double> prices,
                   std::optional<SellerId>) override {
    return exact_demand(oracle_, active, prices, cfg_);
  }
  std::string name() const override { return "exact"; }

 private:
  const ValuationOracle& oracle_;
  ExactOptimizerConfig cfg_;
};

// Exact demand for the adversarial family by case analysis. Any optimal set
// is either the regular sellers priced below 1, the cheapest active special
// seller alone, or empty. Ties go to the smaller set, then the
// lexicographically least one, as in exact_demand.
class AdversarialFamilyDemandOracle final : public DemandOracle {
 public:
  explicit AdversarialFamilyDemandOracle(const AdversarialFamilyOracle& family)
      : family_(family) {}

  SellerSet Demand(const SellerSet& active, std::span<const double> prices,
                   std::optional<SellerId>) override {
    const double L = static_cast<double>(family_.L());
    std::vector<SellerId> regular;
    double regular_w = 0.0;
    std::optional<SellerId> special;
    for (SellerId i : active) {
      if (family_.is_special(i)) {
        if (!special || prices[i] < prices[*special]) special = i;
      } else if (prices[i] < 1.0) {
        regular.push_back(i);
        regular_w += 1.0 - prices[i];
      }
    }
    SellerSet best;
    double best_w = 0.0;
    auto offer = [&](SellerSet s, double w) {
      if (detail::Preferred(w, s, best_w, best,
                            OptTieBreak::kMinCardinalityThenLex)) {
        best = std::move(s);
        best_w = w;
      }
    };
    if (special) offer(SellerSet{*special}, L - prices[*special]);
    if (!regular.empty()) offer(SellerSet(std::move(regular)), regular_w);
    return best;
  }
  std::string name() const override { return "exact-family"; }

 private:
  const AdversarialFamilyOracle& family_;
};

// Stateful oracle built on cost-scaled greedy: keeps a tentative set T,
// initially empty, and adds the previously lowered seller i whenever i is
// still active and f(i | T) > 2 p_i. Bound to a single run.
class CostScaledDemandOracle final : public DemandOracle {
 public:
  void BeginRun(const ValuationOracle& oracle) override {
    if (oracle_) {
      throw MisuseError("cost-scaled demand state reused across auction runs");
    }
    oracle_ = &oracle;
    state_ = oracle.make_state();
    admission_marginal_.assign(oracle.num_sellers(), 0.0);
  }

  SellerSet Demand(const SellerSet& active, std::span<const double> prices,
                   std::optional<SellerId> previous) override {
    if (!oracle_) {
      throw MisuseError("cost-scaled demand queried outside an auction run");
    }
    if (previous && active.contains(*previous) &&
        !state_->members().contains(*previous)) {
      const double gain = state_->marginal(*previous);
      if (gain > 2.0 * prices[*previous]) {
        admission_marginal_[*previous] = gain;
        state_->add(*previous);
      }
    }
    return state_->members();
  }

  std::string name() const override { return "cost-scaled"; }

  const SellerSet& tentative() const {
    static const SellerSet kEmpty;
    return state_ ? state_->members() : kEmpty;
  }
  // f(i | T_i) for each i at the moment it joined T.
  const std::vector<double>& admission_marginals() const {
    return admission_marginal_;
  }

 private:
  const ValuationOracle* oracle_ = nullptr;
  std::unique_ptr<MarginalState> state_;
  std::vector<double> admission_marginal_;
};

// One step of the oracle-driven update, exposed for direct testing.
inline SellerSet cost_scaled_demand(CostScaledDemandOracle& state,
                                    std::optional<SellerId> previous,
                                    const SellerSet& active,
                                    std::span<const double> prices) {
  return state.Demand(active, prices, previous);
}

// ---------------------------------------------------------------------------
// Schedules.

class Schedule {
 public:
  virtual ~Schedule() = default;
  // Picks a seller from active \ demanded, which is never empty.
  virtual SellerId Select(const SellerSet& active, const SellerSet& demanded,
                          std::span<const double> prices) = 0;
  virtual std::string name() const = 0;
};

namespace detail {

inline std::vector<SellerId> Eligible(const SellerSet& active,
                                      const SellerSet& demanded) {
  std::vector<SellerId> out;
  std::set_difference(active.begin(), active.end(), demanded.begin(),
                      demanded.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

class LexicographicSchedule final : public Schedule {
 public:
  SellerId Select(const SellerSet& active, const SellerSet& demanded,
                  std::span<const double>) override {
    for (SellerId i : active) {
      if (!demanded.contains(i)) return i;
    }
    throw InternalError("schedule called with nothing to select");
  }
  std::string name() const override { return "lex"; }
};

// Cycles through seller ids, starting after the previously selected one.
class RoundRobinSchedule final : public Schedule {
 public:
  SellerId Select(const SellerSet& active, const SellerSet& demanded,
                  std::span<const double>) override {
    const auto eligible = detail::Eligible(active, demanded);
    if (eligible.empty()) {
      throw InternalError("schedule called with nothing to select");
    }
    auto it = last_ ? std::upper_bound(eligible.begin(), eligible.end(), *last_)
                    : eligible.begin();
    if (it == eligible.end()) it = eligible.begin();
    last_ = *it;
    return *it;
  }
  std::string name() const override { return "rr"; }

 private:
  std::optional<SellerId> last_;
};

// Uniform choice among eligible sellers from a seeded stream.
class RandomSchedule final : public Schedule {
 public:
  explicit RandomSchedule(std::uint64_t seed)
      : rng_(RandomSeed(seed).stream(0x5c4edULL)) {}

  SellerId Select(const SellerSet& active, const SellerSet& demanded,
                  std::span<const double>) override {
    const auto eligible = detail::Eligible(active, demanded);
    if (eligible.empty()) {
      throw InternalError("schedule called with nothing to select");
    }
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    return eligible[pick(rng_)];
  }
  std::string name() const override { return "random"; }

 private:
  std::mt19937_64 rng_;
};

// Follows a fixed list of seller ids, skipping entries that are not
// eligible; falls back to the lowest eligible seller once exhausted.
class ScriptedSchedule final : public Schedule {
 public:
  explicit ScriptedSchedule(std::vector<SellerId> script)
      : script_(std::move(script)) {}

  SellerId Select(const SellerSet& active, const SellerSet& demanded,
                  std::span<const double> prices) override {
    while (pos_ < script_.size()) {
      const SellerId i = script_[pos_++];
      if (active.contains(i) && !demanded.contains(i)) return i;
    }
    return fallback_.Select(active, demanded, prices);
  }
  std::string name() const override { return "scripted"; }

 private:
  std::vector<SellerId> script_;
  std::size_t pos_ = 0;
  LexicographicSchedule fallback_;
};

// Adversary for the lower-bound family. Phase 1 lowers special sellers not
// in demand until one is priced below L - 1; phase 2 lowers the lowest
// regular seller not in demand; otherwise the lowest eligible seller.
class AdversarialFamilySchedule final : public Schedule {
 public:
  explicit AdversarialFamilySchedule(std::size_t L) : L_(L) {}

  SellerId Select(const SellerSet& active, const SellerSet& demanded,
                  std::span<const double> prices) override {
    const double threshold = static_cast<double>(L_) - 1.0;
    if (!phase_two_) {
      bool reached = false;
      for (SellerId s : {L_, L_ + 1}) {
        if (active.contains(s) && prices[s] < threshold) reached = true;
      }
      if (reached) {
        phase_two_ = true;
      } else {
        for (SellerId s : {L_, L_ + 1}) {
          if (active.contains(s) && !demanded.contains(s)) return s;
        }
      }
    }
    for (SellerId i : active) {
      if (i < L_ && !demanded.contains(i)) return i;
    }
    return fallback_.Select(active, demanded, prices);
  }
  std::string name() const override { return "adversarial-family"; }

 private:
  std::size_t L_;
  bool phase_two_ = false;
  LexicographicSchedule fallback_;
};

// ---------------------------------------------------------------------------
// Auctions.

struct DescendingOutcome {
  AuctionOutcome auction;
  std::size_t iterations = 0;  // price decrements
};

// Prices start at f(i | empty). While D(S, p) is a strict subset of S the
// schedule picks i in S \ D(S, p) and lowers p_i by epsilon; i leaves with
// price 0 once p_i < b_i. Winners are S at termination, paid their prices.
inline DescendingOutcome run_descending(const ValuationOracle& oracle,
                                        std::span<const double> bids,
                                        DemandOracle& demand,
                                        Schedule& schedule, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  check_bids(oracle, bids);
  const std::uint64_t q0 = oracle.query_count();
  const std::size_t n = oracle.num_sellers();
  std::vector<double> prices(n);
  double cap = static_cast<double>(n);
  for (SellerId i = 0; i < n; ++i) {
    prices[i] = oracle.marginal(i, {});
    cap += std::ceil(prices[i] / epsilon);
  }
  demand.BeginRun(oracle);

  DescendingOutcome out;
  SellerSet active = SellerSet::All(n);
  std::optional<SellerId> previous;
  while (true) {
    const SellerSet demanded = demand.Demand(active, prices, previous);
    if (!demanded.is_subset_of(active)) {
      throw InternalError("demand oracle returned an inactive seller");
    }
    if (demanded.size() == active.size()) break;
    if (static_cast<double>(++out.iterations) > cap) {
      throw InternalError("descending auction exceeded its iteration cap");
    }
    const SellerId i = schedule.Select(active, demanded, prices);
    if (!active.contains(i) || demanded.contains(i)) {
      throw InternalError("schedule picked an ineligible seller");
    }
    prices[i] -= epsilon;
    if (prices[i] < bids[i]) {
      active.erase(i);
      prices[i] = 0.0;
    }
    previous = i;
  }

  out.auction.winners = active;
  out.auction.payments.assign(n, 0.0);
  for (SellerId i : active) out.auction.payments[i] = prices[i];
  finalize_outcome(out.auction, oracle);
  out.auction.oracle_queries = oracle.query_count() - q0;
  return out;
}

struct OnlineDescendingOptions {
  // Lower each price from f(k | empty) in steps of epsilon before the final
  // assignment of the posted price, instead of in a single assignment.
  bool epsilon_stepping = false;
  double epsilon = 0.01;
};

// Descending auction whose schedule replays the posted-price mechanism:
// each arriving seller's price drops to p_k = online_price(rule, k, S); the
// seller stays (and is paid p_k) iff b_k < p_k.
inline DescendingOutcome run_descending_from_online(
    const ScoringRule& rule, const ValuationOracle& oracle,
    std::span<const double> bids, const ArrivalOrder& order,
    const OnlineDescendingOptions& opt = {}) {
  detail::CheckOnline(rule, oracle, bids, order);
  if (opt.epsilon_stepping && !(opt.epsilon > 0.0)) {
    throw InputError("epsilon must be positive");
  }
  const std::uint64_t q0 = oracle.query_count();
  const std::size_t n = oracle.num_sellers();
  DescendingOutcome out;
  out.auction.payments.assign(n, 0.0);
  auto state = oracle.make_state();
  for (SellerId k : order) {
    const double target = online_price_from_marginal(rule, state->marginal(k));
    double price = oracle.marginal(k, {});
    if (opt.epsilon_stepping) {
      while (price - opt.epsilon > target) {
        price -= opt.epsilon;
        ++out.iterations;
      }
    }
    price = target;
    ++out.iterations;
    if (bids[k] < price) {
      out.auction.payments[k] = price;
      state->add(k);
    }
  }
  out.auction.winners = state->members();
  finalize_outcome(out.auction, oracle);
  out.auction.oracle_queries = oracle.query_count() - q0;
  return out;
}

}  // namespace procauction
