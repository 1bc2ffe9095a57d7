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

// Online selection over an arrival order and the matching posted-price
// mechanism.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/random.hpp"
#include "procauction/scoring.hpp"
#include "procauction/selection.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

// A permutation of [0, n) giving the order in which sellers arrive.
class ArrivalOrder {
 public:
  ArrivalOrder() = default;
  explicit ArrivalOrder(std::vector<SellerId> sequence)
      : sequence_(std::move(sequence)) {
    std::vector<char> seen(sequence_.size(), 0);
    for (SellerId id : sequence_) {
      if (id >= sequence_.size() || seen[id]) {
        throw InputError("arrival order is not a permutation of [0, n)");
      }
      seen[id] = 1;
    }
  }

  static ArrivalOrder Identity(std::size_t n) {
    std::vector<SellerId> s(n);
    std::iota(s.begin(), s.end(), SellerId{0});
    return ArrivalOrder(std::move(s));
  }

  static ArrivalOrder Reverse(std::size_t n) {
    std::vector<SellerId> s(n);
    std::iota(s.rbegin(), s.rend(), SellerId{0});
    return ArrivalOrder(std::move(s));
  }

  static ArrivalOrder Random(std::size_t n, std::uint64_t seed) {
    std::vector<SellerId> s(n);
    std::iota(s.begin(), s.end(), SellerId{0});
    auto rng = RandomSeed(seed).stream(0x0bde7ULL);
    std::shuffle(s.begin(), s.end(), rng);
    return ArrivalOrder(std::move(s));
  }

  std::size_t size() const { return sequence_.size(); }
  std::span<const SellerId> sequence() const { return sequence_; }
  auto begin() const { return sequence_.begin(); }
  auto end() const { return sequence_.end(); }

  friend bool operator==(const ArrivalOrder&, const ArrivalOrder&) = default;

 private:
  std::vector<SellerId> sequence_;
};

struct PostedPriceOutcome {
  SellerSet winners;
  std::vector<double> posted_prices;
  std::vector<double> payments;  // price if accepted, else 0
  std::vector<bool> acceptance;
  std::uint64_t oracle_queries = 0;

  double total_payment() const {
    double total = 0.0;
    for (SellerId i : winners) total += payments[i];
    return total;
  }
};

namespace detail {

inline void CheckOnline(const ScoringRule& rule, const ValuationOracle& oracle,
                        std::span<const double> costs,
                        const ArrivalOrder& order) {
  if (!rule.online_capable()) {
    throw UnsupportedRuleError("rule '" + std::string(rule.name()) +
                               "' is not online-capable");
  }
  check_bids(oracle, costs);
  if (order.size() != oracle.num_sellers()) {
    throw InputError("arrival order length does not match the seller count");
  }
}

}  // namespace detail

// Irrevocably admits each arriving seller k iff G(k, S, c_k) > 0.
inline SellerSet run_online_meta(const ScoringRule& rule,
                                 const ValuationOracle& oracle,
                                 std::span<const double> costs,
                                 const ArrivalOrder& order,
                                 RandomSeed seed = {}) {
  detail::CheckOnline(rule, oracle, costs, order);
  (void)seed;  // no shipped online rule is randomized
  auto state = oracle.make_state();
  for (SellerId k : order) {
    RuleInputs in;
    in.marginal = state->marginal(k);
    if (scoring::Score(rule.kind, in, costs[k]) > 0.0) state->add(k);
  }
  return state->members();
}

// Posts p_k = online_price(rule, k, S) to each arriving seller, who accepts
// iff their cost is strictly below it.
inline PostedPriceOutcome run_posted_price(const ScoringRule& rule,
                                           const ValuationOracle& oracle,
                                           std::span<const double> costs,
                                           const ArrivalOrder& order,
                                           RandomSeed seed = {}) {
  detail::CheckOnline(rule, oracle, costs, order);
  (void)seed;
  const std::uint64_t q0 = oracle.query_count();
  const std::size_t n = oracle.num_sellers();
  PostedPriceOutcome out;
  out.posted_prices.assign(n, 0.0);
  out.payments.assign(n, 0.0);
  out.acceptance.assign(n, false);
  auto state = oracle.make_state();
  for (SellerId k : order) {
    const double price = online_price_from_marginal(rule, state->marginal(k));
    out.posted_prices[k] = price;
    if (costs[k] < price) {
      out.acceptance[k] = true;
      out.payments[k] = price;
      state->add(k);
    }
  }
  out.winners = state->members();
  out.oracle_queries = oracle.query_count() - q0;
  return out;
}

// The worst of `m` random orders (seeded by `seed`) for the online rule,
// measured by welfare at `costs`; the first one wins ties.
inline ArrivalOrder worst_of_orders(const ScoringRule& rule,
                                    const ValuationOracle& oracle,
                                    std::span<const double> costs,
                                    std::size_t m, std::uint64_t seed) {
  const std::size_t n = oracle.num_sellers();
  ArrivalOrder worst = ArrivalOrder::Identity(n);
  double worst_w = kInfinity;
  for (std::size_t t = 0; t < std::max<std::size_t>(m, 1); ++t) {
    ArrivalOrder order = ArrivalOrder::Random(n, hash_combine(seed, t));
    const double w =
        welfare(oracle, costs, run_online_meta(rule, oracle, costs, order));
    if (w < worst_w) {
      worst_w = w;
      worst = std::move(order);
    }
  }
  return worst;
}

}  // namespace procauction
