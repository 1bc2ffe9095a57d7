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

// The greedy meta selection loop and its lazy priority-queue variant.

#pragma once

#include <cmath>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/random.hpp"
#include "procauction/scoring.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

struct SelectionTrace {
  // S_0 .. S_R where R is the number of rounds; padded when a run stops
  // early so that S_k is defined for every k.
  std::vector<SellerSet> tentative_sets;
  // Round (1-based) in which each seller was admitted.
  std::vector<std::optional<std::size_t>> chosen_at;
  std::vector<std::optional<double>> scores_at_admission;
  std::vector<SellerId> admission_order;
  std::uint64_t oracle_queries = 0;

  const SellerSet& winners() const { return tentative_sets.back(); }
  std::size_t rounds() const { return tentative_sets.size() - 1; }
};

inline void check_bids(const ValuationOracle& oracle,
                       std::span<const double> bids) {
  if (bids.size() != oracle.num_sellers()) {
    throw InputError("bid profile has " + std::to_string(bids.size()) +
                     " entries for " + std::to_string(oracle.num_sellers()) +
                     " sellers");
  }
  for (double b : bids) {
    if (!(b >= 0.0) || std::isnan(b)) {
      throw InputError("bids must be nonnegative");
    }
  }
}

namespace detail {

// Top two candidates of a round under (score desc, id asc).
struct RoundLeaders {
  std::optional<SellerId> best;
  double best_score = -kInfinity;
  std::optional<SellerId> runner_up;
  double runner_up_score = -kInfinity;

  void Offer(SellerId id, double score) {
    if (!best || score > best_score) {
      runner_up = best;
      runner_up_score = best_score;
      best = id;
      best_score = score;
    } else if (!runner_up || score > runner_up_score) {
      runner_up = id;
      runner_up_score = score;
    }
  }
};

inline SelectionTrace EmptyTrace(std::size_t n) {
  SelectionTrace t;
  t.tentative_sets.push_back(SellerSet{});
  t.chosen_at.assign(n, std::nullopt);
  t.scores_at_admission.assign(n, std::nullopt);
  return t;
}

inline void RecordRound(SelectionTrace& t, const SellerSet& current,
                        std::size_t round, std::optional<SellerId> admitted,
                        double score) {
  if (admitted) {
    t.chosen_at[*admitted] = round;
    t.scores_at_admission[*admitted] = score;
    t.admission_order.push_back(*admitted);
  }
  t.tentative_sets.push_back(current);
}

// Rounds [first, last] of the naive loop on `ev`, which holds S_{first-1}.
// `excluded` plays the role of a seller bidding +inf: it is never scored.
// `observe(round, leaders)` runs before each admission decision while `ev`
// still holds S_{round-1}.
template <typename Observer>
void NaiveRounds(RuleEvaluator& ev, std::span<const double> bids,
                 std::optional<SellerId> excluded, std::size_t first,
                 std::size_t last, SelectionTrace* trace, Observer&& observe) {
  const std::size_t n = ev.num_sellers();
  const bool prune = ev.bound_pruning();
  // Pruned candidate list. A round whose best score is <= 0 admits nobody,
  // and then every payment threshold reduces to the positive one, so the
  // leader of such a round is immaterial and nonpositive candidates can go.
  std::vector<SellerId> alive;
  if (prune) {
    for (SellerId j = 0; j < n; ++j) {
      if (!ev.current().contains(j) && !(excluded && *excluded == j)) {
        alive.push_back(j);
      }
    }
  }
  for (std::size_t k = first; k <= last; ++k) {
    RoundLeaders leaders;
    if (prune) {
      std::size_t kept = 0;
      for (SellerId j : alive) {
        if (ev.current().contains(j) || ev.NeverPositive(j, bids[j])) continue;
        alive[kept++] = j;
        const double floor = leaders.best ? std::max(0.0, leaders.best_score) : 0.0;
        // Candidates come in id order, so one that cannot exceed the
        // leader cannot displace it.
        if (ev.ScoreUpperBound(j, bids[j], k) <= floor) continue;
        leaders.Offer(j, ev.Score(j, bids[j], k));
      }
      alive.resize(kept);
    } else {
      for (SellerId j = 0; j < n; ++j) {
        if (ev.current().contains(j) || (excluded && *excluded == j)) continue;
        leaders.Offer(j, ev.Score(j, bids[j], k));
      }
    }
    observe(k, leaders);
    std::optional<SellerId> admitted;
    if (leaders.best && leaders.best_score > 0.0) {
      admitted = leaders.best;
      ev.Admit(*admitted);
    }
    if (trace) {
      RecordRound(*trace, ev.current(), k, admitted, leaders.best_score);
    }
  }
}

struct QueueEntry {
  double score;
  SellerId id;
  std::size_t stamp;  // |S| when the score was computed
};

struct QueueOrder {
  // std::priority_queue pops the "largest": highest score, then lowest id.
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.id > b.id;
  }
};

using LazyQueue =
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder>;

// Lazy loop from round `first` on `ev`, which holds S_{first-1}. Candidates
// are every seller outside S_{first-1} other than `excluded`. Stops at the
// first round whose best score is <= 0 or after round `last`.
// `on_admit(round, id, score)` runs before `id` joins `ev`. Returns the
// round at which the loop stopped admitting (last + 1 if it never did).
//
// The stale test keeps the strict comparison "g > max(0, s*) or s* < 0".
// A popped entry whose score is already fresh is accepted as is: it heads a
// queue of upper bounds, so it is the lexicographic argmax, and re-inserting
// it could cycle forever on exact ties.
template <typename OnAdmit>
std::size_t LazyRounds(RuleEvaluator& ev, std::span<const double> bids,
                       std::optional<SellerId> excluded, std::size_t first,
                       std::size_t last, SelectionTrace* trace,
                       OnAdmit&& on_admit) {
  const std::size_t n = ev.num_sellers();
  LazyQueue queue;
  {
    std::vector<QueueEntry> init;
    for (SellerId j = 0; j < n; ++j) {
      if (ev.current().contains(j) || (excluded && *excluded == j)) continue;
      init.push_back({ev.Score(j, bids[j], first), j, ev.current().size()});
    }
    queue = LazyQueue(QueueOrder{}, std::move(init));
  }

  for (std::size_t k = first; k <= last; ++k) {
    if (queue.empty()) return k;
    const std::size_t now = ev.current().size();
    QueueEntry top = queue.top();
    queue.pop();
    double g = top.stamp == now ? top.score : ev.Score(top.id, bids[top.id], k);
    while (top.stamp != now) {
      const double s_star = queue.empty() ? -kInfinity : queue.top().score;
      if (g > std::max(0.0, s_star) || s_star < 0.0) break;
      QueueEntry next = queue.top();
      queue.pop();
      queue.push({g, top.id, now});
      top = next;
      g = top.stamp == now ? top.score : ev.Score(top.id, bids[top.id], k);
    }
    if (!(g > 0.0)) {
      return k;
    }
    on_admit(k, top.id, g);
    ev.Admit(top.id);
    if (trace) RecordRound(*trace, ev.current(), k, top.id, g);
  }
  return last + 1;
}

inline void PadTrace(SelectionTrace& t, std::size_t rounds) {
  while (t.tentative_sets.size() < rounds + 1) {
    t.tentative_sets.push_back(t.tentative_sets.back());
  }
}

}  // namespace detail

// R = rule.rounds(n) rounds; each admits the lowest-index argmax iff its
// score is strictly positive. `bound_pruning` skips candidates whose stale
// score cannot lead the round (submodular oracles only); the outcome is
// unchanged and fewer queries are issued.
inline SelectionTrace run_meta(const ScoringRule& rule,
                               const ValuationOracle& oracle,
                               std::span<const double> bids,
                               RandomSeed seed = {},
                               bool bound_pruning = false) {
  check_bids(oracle, bids);
  const std::size_t n = oracle.num_sellers();
  const std::uint64_t q0 = oracle.query_count();
  SelectionTrace trace = detail::EmptyTrace(n);
  if (n == 0) return trace;
  RuleEvaluator ev(rule, oracle, seed);
  ev.set_bound_pruning(bound_pruning);
  detail::NaiveRounds(ev, bids, std::nullopt, 1, rule.rounds(n), &trace,
                      [](std::size_t, const detail::RoundLeaders&) {});
  trace.oracle_queries = oracle.query_count() - q0;
  return trace;
}

// Lazy evaluation for rules with diminishing returns. Same winners and
// admission rounds as run_meta; stops early and pads the trace.
inline SelectionTrace run_meta_lazy(const ScoringRule& rule,
                                    const ValuationOracle& oracle,
                                    std::span<const double> bids,
                                    RandomSeed seed = {}) {
  if (!rule.diminishing_return()) {
    throw UnsupportedRuleError("lazy selection needs a diminishing-return "
                               "rule, got '" +
                               std::string(rule.name()) + "'");
  }
  check_bids(oracle, bids);
  const std::size_t n = oracle.num_sellers();
  const std::uint64_t q0 = oracle.query_count();
  SelectionTrace trace = detail::EmptyTrace(n);
  if (n == 0) return trace;
  RuleEvaluator ev(rule, oracle, seed);
  const std::size_t rounds = rule.rounds(n);
  detail::LazyRounds(ev, bids, std::nullopt, 1, rounds, &trace,
                     [](std::size_t, SellerId, double) {});
  detail::PadTrace(trace, rounds);
  trace.oracle_queries = oracle.query_count() - q0;
  return trace;
}

}  // namespace procauction
