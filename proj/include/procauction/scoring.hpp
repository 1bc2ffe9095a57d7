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

// Scoring rules G(i, S, b, k, r) for the greedy meta algorithm, with their
// closed-form inversions in the bid coordinate.
//
// Every rule is affine or a ratio in b_i, so payment thresholds and posted
// prices are computed analytically. Rules only ever look at seller i's own
// bid and at an "effective marginal" of i, which is
//   f(i | S)                               for most rules, and
//   min over the trajectory S_0..S_t of F(i | S_t)   for the noisy rule.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/random.hpp"
#include "procauction/seller_set.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RuleKind {
  kGreedyMargin,
  kGreedyRate,
  kDistortedGreedy,
  kStochasticDistortedGreedy,
  kRoiGreedy,
  kCostScaled,
  kNoisyDistortedGreedy,
};

inline constexpr std::array<RuleKind, 7> kAllRuleKinds = {
    RuleKind::kGreedyMargin,     RuleKind::kGreedyRate,
    RuleKind::kDistortedGreedy,  RuleKind::kStochasticDistortedGreedy,
    RuleKind::kRoiGreedy,        RuleKind::kCostScaled,
    RuleKind::kNoisyDistortedGreedy,
};

inline constexpr std::string_view rule_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::kGreedyMargin: return "greedy-margin";
    case RuleKind::kGreedyRate: return "greedy-rate";
    case RuleKind::kDistortedGreedy: return "distorted";
    case RuleKind::kStochasticDistortedGreedy: return "stochastic-distorted";
    case RuleKind::kRoiGreedy: return "roi";
    case RuleKind::kCostScaled: return "cost-scaled";
    case RuleKind::kNoisyDistortedGreedy: return "noisy-distorted";
  }
  return "?";
}

struct ScoringRule {
  RuleKind kind = RuleKind::kGreedyMargin;

  // Cardinality k of the distorted family. Unset means k = n, i.e. the
  // unconstrained problem run for n rounds.
  std::optional<std::size_t> cardinality;

  // Stochastic rule: error parameter of the batch size
  // s = ceil((n / k) * ln(1 / eps)). `batch_size` overrides s; a batch size
  // of 1 gives the single-draw form 1[i = r(k)].
  double sample_epsilon = 0.1;
  std::optional<std::size_t> batch_size;

  // Noisy rule: noise level of the oracle it runs against, and the cost
  // multiplier x (default 1 + 2 eps k + eps).
  double noise_epsilon = 0.0;
  std::optional<double> cost_multiplier;

  static ScoringRule Of(RuleKind kind) {
    ScoringRule r;
    r.kind = kind;
    return r;
  }

  static ScoringRule Noisy(double eps) {
    ScoringRule r = Of(RuleKind::kNoisyDistortedGreedy);
    r.noise_epsilon = eps;
    return r;
  }

  // Accepts the canonical names used by the CLI.
  static ScoringRule Parse(std::string_view name) {
    for (RuleKind kind : kAllRuleKinds) {
      if (rule_name(kind) == name) return Of(kind);
    }
    throw InputError("unknown scoring rule '" + std::string(name) + "'");
  }

  std::string_view name() const { return rule_name(kind); }

  // G(i, S, b, j) >= G(i, T, b, k) for S subset of T and j <= k.
  bool diminishing_return() const {
    return kind == RuleKind::kGreedyMargin || kind == RuleKind::kGreedyRate ||
           kind == RuleKind::kRoiGreedy || kind == RuleKind::kCostScaled;
  }

  // Score does not depend on the round index or horizon.
  bool online_capable() const { return diminishing_return(); }

  bool randomized() const {
    return kind == RuleKind::kStochasticDistortedGreedy;
  }

  std::size_t rounds(std::size_t n) const {
    if (cardinality && (*cardinality == 0 || *cardinality > n)) {
      throw InputError("cardinality must lie in [1, n]");
    }
    return cardinality.value_or(n);
  }

  // (1 - 1/k)^(k - round) for the distorted family, 1 otherwise.
  double distortion(std::size_t n, std::size_t round) const {
    switch (kind) {
      case RuleKind::kDistortedGreedy:
      case RuleKind::kStochasticDistortedGreedy:
      case RuleKind::kNoisyDistortedGreedy: {
        const std::size_t k = rounds(n);
        if (k <= 1 || round >= k) return 1.0;
        return std::pow(1.0 - 1.0 / static_cast<double>(k),
                        static_cast<double>(k - round));
      }
      default:
        return 1.0;
    }
  }

  std::size_t sample_size(std::size_t n) const {
    if (batch_size) return std::clamp<std::size_t>(*batch_size, 1, n);
    const double k = static_cast<double>(rounds(n));
    const double s =
        std::ceil(static_cast<double>(n) / k * std::log(1.0 / sample_epsilon));
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(s, 1.0)),
                                   1, n);
  }

  double noisy_cost_multiplier(std::size_t n) const {
    if (cost_multiplier) return *cost_multiplier;
    const double k = static_cast<double>(rounds(n));
    return 1.0 + 2.0 * noise_epsilon * k + noise_epsilon;
  }
};

// Per-call view of the quantities a rule needs besides seller i's bid.
struct RuleInputs {
  double marginal = 0.0;  // effective marginal of seller i
  double distortion = 1.0;
  double cost_multiplier = 1.0;  // x for the noisy rule, 1 otherwise
  bool sampled = true;           // stochastic rule: i in B_k
};

namespace scoring {

// G as a function of the bid, given the effective marginal.
inline double Score(RuleKind kind, const RuleInputs& in, double bid) {
  const double f = in.marginal;
  switch (kind) {
    case RuleKind::kGreedyMargin:
      return f - bid;
    case RuleKind::kGreedyRate:
      if (!(f > 0.0)) return -kInfinity;
      return (f - bid) / f;
    case RuleKind::kDistortedGreedy:
      return in.distortion * f - bid;
    case RuleKind::kStochasticDistortedGreedy:
      if (!in.sampled) return -kInfinity;
      return in.distortion * f - bid;
    case RuleKind::kRoiGreedy:
      if (bid == 0.0) return f > 0.0 ? kInfinity : 0.0;
      return (f - bid) / bid;
    case RuleKind::kCostScaled:
      return f - 2.0 * bid;
    case RuleKind::kNoisyDistortedGreedy:
      return in.distortion * f - in.cost_multiplier * bid;
  }
  return -kInfinity;
}

// sup{ z >= 0 : G(z) > 0 }, or 0 when the set is empty.
inline double PositiveThreshold(RuleKind kind, const RuleInputs& in) {
  const double f = in.marginal;
  double z = 0.0;
  switch (kind) {
    case RuleKind::kGreedyMargin:
    case RuleKind::kGreedyRate:
    case RuleKind::kRoiGreedy:
      z = f;
      break;
    case RuleKind::kDistortedGreedy:
      z = in.distortion * f;
      break;
    case RuleKind::kStochasticDistortedGreedy:
      z = in.sampled ? in.distortion * f : 0.0;
      break;
    case RuleKind::kCostScaled:
      z = f / 2.0;
      break;
    case RuleKind::kNoisyDistortedGreedy:
      z = in.distortion * f / in.cost_multiplier;
      break;
  }
  return z > 0.0 ? z : 0.0;
}

// sup{ z >= 0 : G(z) >= competitor } obtained by inverting G at the
// competitor's score; +inf when there is no (sampled) competitor. Whether the
// boundary itself wins the tie does not move the supremum.
inline double ArgmaxThreshold(RuleKind kind, const RuleInputs& in,
                              double competitor) {
  if (competitor == -kInfinity) return kInfinity;
  const double f = in.marginal;
  double z = 0.0;
  switch (kind) {
    case RuleKind::kGreedyMargin:
      z = f - competitor;
      break;
    case RuleKind::kGreedyRate:
      if (!(f > 0.0)) return 0.0;
      z = f * (1.0 - competitor);
      break;
    case RuleKind::kDistortedGreedy:
      z = in.distortion * f - competitor;
      break;
    case RuleKind::kStochasticDistortedGreedy:
      if (!in.sampled) return 0.0;
      z = in.distortion * f - competitor;
      break;
    case RuleKind::kRoiGreedy:
      if (competitor == kInfinity || !(f > 0.0)) return 0.0;
      if (competitor <= -1.0) return kInfinity;
      z = f / (1.0 + competitor);
      break;
    case RuleKind::kCostScaled:
      z = (f - competitor) / 2.0;
      break;
    case RuleKind::kNoisyDistortedGreedy:
      z = (in.distortion * f - competitor) / in.cost_multiplier;
      break;
  }
  return z > 0.0 ? z : 0.0;
}

}  // namespace scoring

// Tentative set, trajectory and round a score is evaluated at.
struct ScoreContext {
  SellerSet tentative;
  // Chain S_0 ⊆ ... ⊆ tentative; only read by the noisy rule. Empty means
  // {tentative}.
  std::vector<SellerSet> trajectory;
  std::size_t round = 1;
};

// Effective marginal and flags of seller i under `rule` at `ctx`.
inline RuleInputs rule_inputs(const ScoringRule& rule, SellerId i,
                              const ScoreContext& ctx,
                              const ValuationOracle& oracle,
                              const RandomSeed& seed) {
  const std::size_t n = oracle.num_sellers();
  RuleInputs in;
  in.distortion = rule.distortion(n, ctx.round);
  if (rule.kind == RuleKind::kNoisyDistortedGreedy) {
    in.cost_multiplier = rule.noisy_cost_multiplier(n);
    double best = kInfinity;
    if (ctx.trajectory.empty()) {
      best = oracle.marginal(i, ctx.tentative);
    } else {
      for (const SellerSet& s : ctx.trajectory) {
        best = std::min(best, oracle.value(s.with(i)) - oracle.value(s));
      }
    }
    in.marginal = best;
  } else {
    in.marginal = oracle.marginal(i, ctx.tentative);
  }
  if (rule.kind == RuleKind::kStochasticDistortedGreedy) {
    const auto b = seed.batch(ctx.round, n, rule.sample_size(n));
    in.sampled = std::binary_search(b.begin(), b.end(), i);
  }
  return in;
}

inline double score(const ScoringRule& rule, SellerId i,
                    const ScoreContext& ctx, double bid,
                    const ValuationOracle& oracle, const RandomSeed& seed = {}) {
  if (!(bid >= 0.0)) throw InputError("score: bid must be nonnegative");
  return scoring::Score(rule.kind, rule_inputs(rule, i, ctx, oracle, seed),
                        bid);
}

inline double positive_threshold(const ScoringRule& rule, SellerId i,
                                 const ScoreContext& ctx,
                                 const ValuationOracle& oracle,
                                 const RandomSeed& seed = {}) {
  return scoring::PositiveThreshold(rule.kind,
                                    rule_inputs(rule, i, ctx, oracle, seed));
}

// Supremum bid at which i is the argmax against the best competitor. Pass
// std::nullopt for `competitor_id` when no competitor remains.
inline double argmax_threshold(const ScoringRule& rule, SellerId i,
                               const ScoreContext& ctx,
                               double competitor_best_score,
                               std::optional<SellerId> competitor_id,
                               const ValuationOracle& oracle,
                               const RandomSeed& seed = {}) {
  if (!competitor_id) return kInfinity;
  return scoring::ArgmaxThreshold(rule.kind,
                                  rule_inputs(rule, i, ctx, oracle, seed),
                                  competitor_best_score);
}

// Posted price: the root z of G(k, S, z) = 0 for an online-capable rule.
inline double online_price_from_marginal(const ScoringRule& rule,
                                         double marginal) {
  if (!rule.online_capable()) {
    throw UnsupportedRuleError("rule '" + std::string(rule.name()) +
                               "' is not online-capable");
  }
  const double f = marginal > 0.0 ? marginal : 0.0;
  return rule.kind == RuleKind::kCostScaled ? f / 2.0 : f;
}

inline double online_price(const ScoringRule& rule, SellerId k,
                           const SellerSet& s, const ValuationOracle& oracle) {
  if (!rule.online_capable()) {
    throw UnsupportedRuleError("rule '" + std::string(rule.name()) +
                               "' is not online-capable");
  }
  return online_price_from_marginal(rule, oracle.marginal(k, s));
}

// ---------------------------------------------------------------------------
// Assumption checks.

// Score of seller i given the whole bid vector. Built-in rules read only
// bids[i]; test fixtures may do anything.
using ScoreFunction = std::function<double(
    SellerId, const ScoreContext&, std::span<const double>)>;

inline ScoreFunction score_function(const ScoringRule& rule,
                                    const ValuationOracle& oracle,
                                    RandomSeed seed = {}) {
  return [rule, &oracle, seed](SellerId i, const ScoreContext& ctx,
                               std::span<const double> bids) {
    return score(rule, i, ctx, bids[i], oracle, seed);
  };
}

struct ValidationReport {
  std::size_t trials = 0;
  bool monotone_in_own_bid = true;
  bool negative_above_marginal = true;
  bool independent_of_other_bids = true;
  std::optional<std::string> counterexample;

  bool ok() const {
    return monotone_in_own_bid && negative_above_marginal &&
           independent_of_other_bids;
  }
};

namespace detail {

inline SellerSet RandomSubset(std::mt19937_64& rng, std::size_t n,
                              double density) {
  std::bernoulli_distribution in(density);
  std::vector<SellerId> ids;
  for (SellerId i = 0; i < n; ++i) {
    if (in(rng)) ids.push_back(i);
  }
  return SellerSet(std::move(ids));
}

}  // namespace detail

// Randomized check of the three mechanism-design assumptions on `trials`
// samples of (i, S, b): (1) G non-increasing in b_i over a bid grid,
// (2) G < 0 whenever b_i > f(i | S), (3) G unchanged when b_{-i} moves.
inline ValidationReport validate_assumptions(const ScoreFunction& g,
                                             const ValuationOracle& oracle,
                                             std::size_t trials,
                                             std::uint64_t seed) {
  ValidationReport report;
  report.trials = trials;
  const std::size_t n = oracle.num_sellers();
  if (n == 0) return report;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<SellerId> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (!report.counterexample) report.counterexample = what;
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const SellerId i = pick(rng);
    SellerSet s = detail::RandomSubset(rng, n, 0.4);
    s.erase(i);
    ScoreContext ctx{.tentative = s, .trajectory = {}, .round = 1 + t % n};
    const double f = oracle.marginal(i, s);
    const double top = 2.0 * f + 1.0;
    std::vector<double> bids(n);
    for (double& b : bids) b = unit(rng) * top;

    // (1) monotone on a grid
    double prev = kInfinity;
    for (int step = 0; step <= 20; ++step) {
      bids[i] = top * step / 20.0;
      const double v = g(i, ctx, bids);
      if (v > prev) {
        fail(report.monotone_in_own_bid,
             "score increases in own bid: seller " + std::to_string(i) +
                 " S=" + to_string(s) + " bid=" + std::to_string(bids[i]));
        break;
      }
      prev = v;
    }

    // (2) negative above the marginal
    bids[i] = f + 0.1 + unit(rng) * (f + 1.0);
    if (!(g(i, ctx, bids) < 0.0)) {
      fail(report.negative_above_marginal,
           "non-negative score above marginal: seller " + std::to_string(i) +
               " S=" + to_string(s) + " f(i|S)=" + std::to_string(f) +
               " bid=" + std::to_string(bids[i]));
    }

    // (3) independence of other bids
    bids[i] = unit(rng) * f;
    const double base = g(i, ctx, bids);
    std::vector<double> moved = bids;
    for (SellerId j = 0; j < n; ++j) {
      if (j != i) moved[j] = unit(rng) * top;
    }
    const double after = g(i, ctx, moved);
    if (!(base == after || (std::isnan(base) && std::isnan(after)))) {
      fail(report.independent_of_other_bids,
           "score depends on other bids: seller " + std::to_string(i) +
               " S=" + to_string(s));
    }
  }
  return report;
}

inline ValidationReport validate_assumptions(const ScoringRule& rule,
                                             const ValuationOracle& oracle,
                                             std::size_t trials,
                                             std::uint64_t seed) {
  return validate_assumptions(score_function(rule, oracle, RandomSeed(seed)),
                              oracle, trials, seed);
}

// ---------------------------------------------------------------------------
// Incremental evaluation used by the selection loops.

// Tracks the tentative set of one run and serves effective marginals for
// candidates. For the noisy rule it keeps, per candidate, the running minimum
// of F(i | S_t) over the trajectory, extended lazily.
class RuleEvaluator {
 public:
  RuleEvaluator(const ScoringRule& rule, const ValuationOracle& oracle,
                RandomSeed seed)
      : rule_(rule),
        oracle_(oracle),
        seed_(seed),
        n_(oracle.num_sellers()),
        state_(oracle.make_state()) {
    if (noisy()) {
      x_ = rule_.noisy_cost_multiplier(n_);
      trajectory_.push_back(SellerSet{});
      trajectory_values_.push_back(oracle_.value(SellerSet{}));
      noisy_min_.assign(n_, kInfinity);
      noisy_seen_.assign(n_, 0);
    }
  }

  RuleEvaluator(const RuleEvaluator&) = delete;
  RuleEvaluator& operator=(const RuleEvaluator&) = delete;

  const ScoringRule& rule() const { return rule_; }
  const ValuationOracle& oracle() const { return oracle_; }
  const RandomSeed& seed() const { return seed_; }
  std::size_t num_sellers() const { return n_; }
  const SellerSet& current() const { return state_->members(); }
  const std::vector<SellerSet>& trajectory() const { return trajectory_; }

  // Replays a trajectory prefix S_0 ⊆ ... ⊆ S_t. Only sets that differ from
  // their predecessor are admissions.
  void Restore(std::span<const SellerSet> prefix) {
    for (const SellerSet& s : prefix) {
      for (SellerId id : s) {
        if (!current().contains(id)) Admit(id);
      }
    }
  }

  // Pruning in the naive loop: a candidate whose score at its last computed
  // marginal cannot beat the round leader is skipped. Sound for submodular
  // oracles, where marginals only shrink as the set grows. Ignored by the
  // noisy rule.
  void set_bound_pruning(bool on) {
    pruning_ = on && !noisy();
    if (pruning_) last_marginal_.assign(n_, kInfinity);
  }
  bool bound_pruning() const { return pruning_; }

  // Score of i at its last computed marginal, an upper bound on its score
  // now; +inf before the first computation.
  double ScoreUpperBound(SellerId i, double bid, std::size_t round) {
    if (!pruning_ || last_marginal_[i] == kInfinity) return kInfinity;
    RuleInputs in;
    in.distortion = Distortion(round);
    in.sampled = Sampled(i, round);
    in.marginal = in.sampled ? last_marginal_[i] : 0.0;
    return scoring::Score(rule_.kind, in, bid);
  }

  // True once i's score can never again be positive: its last computed
  // marginal already fails at the largest distortion, 1.
  bool NeverPositive(SellerId i, double bid) const {
    if (!pruning_ || last_marginal_[i] == kInfinity) return false;
    RuleInputs in;
    in.marginal = last_marginal_[i];
    return !(scoring::Score(rule_.kind, in, bid) > 0.0);
  }

  double EffectiveMarginal(SellerId i) {
    if (!noisy()) {
      const double m = state_->marginal(i);
      if (pruning_) last_marginal_[i] = m;
      return m;
    }
    for (std::size_t t = noisy_seen_[i]; t < trajectory_.size(); ++t) {
      const double with_i = oracle_.value(trajectory_[t].with(i));
      noisy_min_[i] = std::min(noisy_min_[i], with_i - trajectory_values_[t]);
    }
    noisy_seen_[i] = trajectory_.size();
    return noisy_min_[i];
  }

  bool Sampled(SellerId i, std::size_t round) {
    if (rule_.kind != RuleKind::kStochasticDistortedGreedy) return true;
    if (batches_.size() <= round) batches_.resize(round + 1);
    auto& b = batches_[round];
    if (b.empty()) {
      b.assign(n_, 0);
      for (SellerId j : seed_.batch(round, n_, rule_.sample_size(n_))) b[j] = 1;
    }
    return b[i] != 0;
  }

  double Distortion(std::size_t round) {
    if (distortion_.size() <= round) distortion_.resize(round + 1, -1.0);
    if (distortion_[round] < 0.0) distortion_[round] = rule_.distortion(n_, round);
    return distortion_[round];
  }

  RuleInputs Inputs(SellerId i, std::size_t round) {
    RuleInputs in;
    in.distortion = Distortion(round);
    in.cost_multiplier = noisy() ? x_ : 1.0;
    in.sampled = Sampled(i, round);
    // Unsampled candidates never need an oracle query.
    in.marginal = in.sampled ? EffectiveMarginal(i) : 0.0;
    return in;
  }

  double Score(SellerId i, double bid, std::size_t round) {
    return scoring::Score(rule_.kind, Inputs(i, round), bid);
  }

  void Admit(SellerId i) {
    state_->add(i);
    if (noisy()) {
      trajectory_.push_back(current());
      trajectory_values_.push_back(oracle_.value(current()));
    }
  }

 private:
  bool noisy() const { return rule_.kind == RuleKind::kNoisyDistortedGreedy; }

  ScoringRule rule_;
  const ValuationOracle& oracle_;
  RandomSeed seed_;
  std::size_t n_;
  std::unique_ptr<MarginalState> state_;
  double x_ = 1.0;
  std::vector<SellerSet> trajectory_;
  std::vector<double> trajectory_values_;
  std::vector<double> noisy_min_;
  std::vector<std::size_t> noisy_seen_;
  std::vector<std::vector<char>> batches_;
  bool pruning_ = false;
  std::vector<double> last_marginal_;
  std::vector<double> distortion_;
};

}  // namespace procauction
