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

// Exact maximization of f(S) - c(S) by branch and bound.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

struct ExactOptimizerConfig {
  std::size_t max_exhaustive_n = 24;
  bool use_bound_pruning = true;
};

enum class OptTieBreak {
  // Lexicographically least maximizer.
  kLexicographic,
  // Smallest maximizer, then lexicographically least.
  kMinCardinalityThenLex,
};

struct OptResult {
  SellerSet set;
  double welfare = 0.0;
};

namespace detail {

inline bool WelfareTie(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool Preferred(double w, const SellerSet& s, double best_w,
                      const SellerSet& best, OptTieBreak tie) {
  if (!WelfareTie(w, best_w)) return w > best_w;
  if (tie == OptTieBreak::kMinCardinalityThenLex && s.size() != best.size()) {
    return s.size() < best.size();
  }
  return s < best;
}

class BranchAndBound {
 public:
  BranchAndBound(const ValuationOracle& oracle, std::span<const double> costs,
                 std::vector<SellerId> order, OptTieBreak tie)
      : oracle_(oracle),
        costs_(costs),
        order_(std::move(order)),
        tie_(tie),
        state_(oracle.make_state()) {}

  OptResult Solve() {
    best_ = OptResult{SellerSet{}, 0.0};
    Recurse(0, 0.0);
    return best_;
  }

 private:
  void Recurse(std::size_t depth, double w) {
    const SellerSet& s = state_->members();
    if (Preferred(w, s, best_.welfare, best_.set, tie_)) {
      best_ = OptResult{s, w};
    }
    if (depth == order_.size()) return;

    std::vector<double> gains(order_.size() - depth);
    double bound = w;
    for (std::size_t d = depth; d < order_.size(); ++d) {
      gains[d - depth] = state_->marginal(order_[d]) - costs_[order_[d]];
      bound += std::max(0.0, gains[d - depth]);
    }
    if (bound + 1e-9 < best_.welfare) return;

    const SellerId i = order_[depth];
    state_->add(i);
    Recurse(depth + 1, w + gains[0]);
    state_->remove(i);
    Recurse(depth + 1, w);
  }

  const ValuationOracle& oracle_;
  std::span<const double> costs_;
  std::vector<SellerId> order_;
  OptTieBreak tie_;
  std::unique_ptr<MarginalState> state_;
  OptResult best_;
};

inline OptResult Enumerate(const ValuationOracle& oracle,
                           std::span<const double> costs,
                           const std::vector<SellerId>& universe,
                           OptTieBreak tie) {
  OptResult best{SellerSet{}, 0.0};
  const std::uint64_t count = std::uint64_t{1} << universe.size();
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    std::vector<SellerId> ids;
    for (std::size_t b = 0; b < universe.size(); ++b) {
      if (mask >> b & 1) ids.push_back(universe[b]);
    }
    SellerSet s(std::move(ids));
    const double w = welfare(oracle, costs, s);
    if (Preferred(w, s, best.welfare, best.set, tie)) best = OptResult{s, w};
  }
  return best;
}

}  // namespace detail

// Exact maximizer of f(S) - c(S) over subsets of `universe`. The welfare of
// the returned set is recomputed as f(S) - c(S).
inline OptResult exact_opt_over(const ValuationOracle& oracle,
                                std::span<const double> costs,
                                const SellerSet& universe,
                                const ExactOptimizerConfig& cfg = {},
                                OptTieBreak tie = OptTieBreak::kLexicographic) {
  if (costs.size() != oracle.num_sellers()) {
    throw InputError("cost profile size does not match the oracle");
  }
  if (universe.size() > cfg.max_exhaustive_n) {
    throw CapacityError("exact optimizer: " + std::to_string(universe.size()) +
                        " sellers exceed the cap of " +
                        std::to_string(cfg.max_exhaustive_n));
  }
  if (!universe.empty()) oracle.CheckId(universe.max_id());
  std::vector<SellerId> order(universe.begin(), universe.end());
  OptResult r;
  if (cfg.use_bound_pruning) {
    std::vector<double> single(oracle.num_sellers(), 0.0);
    for (SellerId i : order) single[i] = oracle.marginal(i, {}) - costs[i];
    std::stable_sort(order.begin(), order.end(), [&](SellerId a, SellerId b) {
      return single[a] > single[b];
    });
    r = detail::BranchAndBound(oracle, costs, std::move(order), tie).Solve();
  } else {
    r = detail::Enumerate(oracle, costs, order, tie);
  }
  r.welfare = welfare(oracle, costs, r.set);
  return r;
}

// argmax_S f(S) - c(S) over all sellers, lexicographically least on ties.
inline OptResult exact_opt(const ValuationOracle& oracle,
                           std::span<const double> costs,
                           const ExactOptimizerConfig& cfg = {}) {
  return exact_opt_over(oracle, costs, SellerSet::All(oracle.num_sellers()),
                        cfg, OptTieBreak::kLexicographic);
}

// Welfare-maximizing subset of the active set `s` at `prices`, preferring
// smaller sets on ties.
inline SellerSet exact_demand(const ValuationOracle& oracle,
                              const SellerSet& s,
                              std::span<const double> prices,
                              const ExactOptimizerConfig& cfg = {}) {
  return exact_opt_over(oracle, prices, s, cfg,
                        OptTieBreak::kMinCardinalityThenLex)
      .set;
}

}  // namespace procauction
