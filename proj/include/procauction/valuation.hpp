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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "procauction/errors.hpp"
#include "procauction/random.hpp"
#include "procauction/seller_set.hpp"

namespace procauction {

class ValuationOracle;

// Scratch state for incremental marginal queries against a growing (and, for
// branch-and-bound, shrinking) member set. One per run; never shared.
class MarginalState {
 public:
  virtual ~MarginalState() = default;

  // f(i | members). `i` must not be a member.
  virtual double marginal(SellerId i) const = 0;
  virtual void add(SellerId i) = 0;
  virtual void remove(SellerId i) = 0;

  const SellerSet& members() const { return members_; }

  void reset() {
    while (!members_.empty()) remove(members_.max_id());
  }

 protected:
  SellerSet members_;
};

// A monotone submodular valuation f: 2^N -> R>=0 with f(empty) = 0.
//
// Oracles are immutable after construction apart from the relaxed query
// counter, so one instance can be read from several threads.
class ValuationOracle {
 public:
  explicit ValuationOracle(std::size_t num_sellers)
      : num_sellers_(num_sellers) {}
  ValuationOracle(const ValuationOracle& other)
      : num_sellers_(other.num_sellers_) {}
  ValuationOracle& operator=(const ValuationOracle&) = delete;
  virtual ~ValuationOracle() = default;

  std::size_t num_sellers() const { return num_sellers_; }

  double value(const SellerSet& s) const {
    CheckRange(s);
    CountQuery();
    return Evaluate(s);
  }

  double marginal(SellerId i, const SellerSet& s) const {
    CheckRange(s);
    CheckId(i);
    if (s.contains(i)) {
      throw InputError("marginal: seller " + std::to_string(i) +
                       " already in set " + to_string(s));
    }
    CountQuery();
    return EvaluateMarginal(i, s);
  }

  std::unique_ptr<MarginalState> make_state() const { return NewState(); }

  // Number of value/marginal evaluations since construction or last reset.
  std::uint64_t query_count() const {
    return queries_.load(std::memory_order_relaxed);
  }
  void reset_query_count() const {
    queries_.store(0, std::memory_order_relaxed);
  }

  void CountQuery() const { queries_.fetch_add(1, std::memory_order_relaxed); }

  void CheckId(SellerId i) const {
    if (i >= num_sellers_) {
      throw InputError("seller index " + std::to_string(i) +
                       " out of range [0, " + std::to_string(num_sellers_) +
                       ")");
    }
  }

 protected:
  virtual double Evaluate(const SellerSet& s) const = 0;

  virtual double EvaluateMarginal(SellerId i, const SellerSet& s) const {
    return Evaluate(s.with(i)) - Evaluate(s);
  }

  virtual std::unique_ptr<MarginalState> NewState() const;

 private:
  void CheckRange(const SellerSet& s) const {
    if (!s.empty()) CheckId(s.max_id());
  }

  std::size_t num_sellers_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

namespace detail {

// Fallback state: caches f(members) and differences against it.
class GenericMarginalState final : public MarginalState {
 public:
  explicit GenericMarginalState(const ValuationOracle& oracle)
      : oracle_(oracle) {}

  double marginal(SellerId i) const override {
    return oracle_.value(members_.with(i)) - base_;
  }
  void add(SellerId i) override {
    members_.insert(i);
    base_ = oracle_.value(members_);
  }
  void remove(SellerId i) override {
    members_.erase(i);
    base_ = oracle_.value(members_);
  }

 private:
  const ValuationOracle& oracle_;
  double base_ = 0.0;
};

}  // namespace detail

inline std::unique_ptr<MarginalState> ValuationOracle::NewState() const {
  return std::make_unique<detail::GenericMarginalState>(*this);
}

// ---------------------------------------------------------------------------
// Coverage functions.

struct CoverageInstance {
  std::size_t n_sets = 0;
  std::vector<std::vector<std::size_t>> covers;
  std::vector<double> vertex_values;

  // Sorts and deduplicates each cover list; throws InputError on dangling
  // vertex ids, negative values or a covers/n_sets mismatch.
  void Normalize() {
    if (covers.size() != n_sets) {
      throw InputError("coverage instance: covers has " +
                       std::to_string(covers.size()) + " entries, n_sets is " +
                       std::to_string(n_sets));
    }
    for (double v : vertex_values) {
      if (!(v >= 0.0)) throw InputError("coverage instance: negative value");
    }
    for (auto& c : covers) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      if (!c.empty() && c.back() >= vertex_values.size()) {
        throw InputError("coverage instance: vertex id " +
                         std::to_string(c.back()) + " has no value");
      }
    }
  }
};

// f(S) = total value of vertices covered by at least one set in S.
class CoverageOracle final : public ValuationOracle {
 public:
  explicit CoverageOracle(CoverageInstance instance)
      : CoverageOracle(
            std::make_shared<const CoverageInstance>(Checked(std::move(instance)))) {}

  explicit CoverageOracle(std::shared_ptr<const CoverageInstance> instance)
      : ValuationOracle(instance->n_sets), instance_(std::move(instance)) {}

  const CoverageInstance& instance() const { return *instance_; }
  std::shared_ptr<const CoverageInstance> shared_instance() const {
    return instance_;
  }

 protected:
  double Evaluate(const SellerSet& s) const override {
    std::vector<char> covered(instance_->vertex_values.size(), 0);
    for (SellerId i : s) {
      for (std::size_t v : instance_->covers[i]) covered[v] = 1;
    }
    double total = 0.0;
    for (std::size_t v = 0; v < covered.size(); ++v) {
      if (covered[v]) total += instance_->vertex_values[v];
    }
    return total;
  }

  double EvaluateMarginal(SellerId i, const SellerSet& s) const override {
    std::vector<char> covered(instance_->vertex_values.size(), 0);
    for (SellerId j : s) {
      for (std::size_t v : instance_->covers[j]) covered[v] = 1;
    }
    double gain = 0.0;
    for (std::size_t v : instance_->covers[i]) {
      if (!covered[v]) gain += instance_->vertex_values[v];
    }
    return gain;
  }

  std::unique_ptr<MarginalState> NewState() const override {
    return std::make_unique<State>(*this);
  }

 private:
  // Per-vertex count of member sets covering it; marginals cost O(|covers(i)|).
  class State final : public MarginalState {
   public:
    explicit State(const CoverageOracle& oracle)
        : oracle_(oracle), counts_(oracle.instance_->vertex_values.size(), 0) {}

    double marginal(SellerId i) const override {
      oracle_.CountQuery();
      const auto& inst = *oracle_.instance_;
      double gain = 0.0;
      for (std::size_t v : inst.covers[i]) {
        if (counts_[v] == 0) gain += inst.vertex_values[v];
      }
      return gain;
    }
    void add(SellerId i) override {
      if (!members_.insert(i)) return;
      for (std::size_t v : oracle_.instance_->covers[i]) ++counts_[v];
    }
    void remove(SellerId i) override {
      if (!members_.erase(i)) return;
      for (std::size_t v : oracle_.instance_->covers[i]) --counts_[v];
    }

   private:
    const CoverageOracle& oracle_;
    std::vector<std::uint32_t> counts_;
  };

  static CoverageInstance Checked(CoverageInstance inst) {
    inst.Normalize();
    return inst;
  }

  std::shared_ptr<const CoverageInstance> instance_;
};

// f(S) = sum of per-seller weights. Modular, hence trivially submodular.
class AdditiveOracle final : public ValuationOracle {
 public:
  explicit AdditiveOracle(std::vector<double> weights)
      : ValuationOracle(weights.size()), weights_(std::move(weights)) {
    for (double w : weights_) {
      if (!(w >= 0.0)) throw InputError("additive oracle: negative weight");
    }
  }

 protected:
  double Evaluate(const SellerSet& s) const override {
    double total = 0.0;
    for (SellerId i : s) total += weights_[i];
    return total;
  }
  double EvaluateMarginal(SellerId i, const SellerSet&) const override {
    return weights_[i];
  }

 private:
  std::vector<double> weights_;
};

// Lower-bound family for descending auctions with an exact demand oracle.
// Sellers 0..L-1 are "regular", L and L+1 are "special":
//   f(S) = |S| if S holds no special seller, L otherwise.
class AdversarialFamilyOracle final : public ValuationOracle {
 public:
  explicit AdversarialFamilyOracle(std::size_t L)
      : ValuationOracle(CheckedSize(L)), L_(L) {}

  std::size_t L() const { return L_; }
  bool is_special(SellerId i) const { return i >= L_; }

  // Regular sellers bid 1/L, special sellers bid L-2.
  std::vector<double> bids() const {
    std::vector<double> b(L_ + 2, 1.0 / static_cast<double>(L_));
    b[L_] = b[L_ + 1] = static_cast<double>(L_) - 2.0;
    return b;
  }

 protected:
  double Evaluate(const SellerSet& s) const override {
    if (!s.empty() && s.max_id() >= L_) return static_cast<double>(L_);
    return static_cast<double>(s.size());
  }
  double EvaluateMarginal(SellerId i, const SellerSet& s) const override {
    const bool has_special = !s.empty() && s.max_id() >= L_;
    if (has_special) return 0.0;
    if (is_special(i)) return static_cast<double>(L_ - s.size());
    return 1.0;
  }

 private:
  static std::size_t CheckedSize(std::size_t L) {
    if (L == 0) throw InputError("adversarial family: L must be positive");
    return L + 2;
  }

  std::size_t L_;
};

// Wraps an arbitrary set function; used for test fixtures.
class FunctionOracle final : public ValuationOracle {
 public:
  using Fn = std::function<double(const SellerSet&)>;

  FunctionOracle(std::size_t n, Fn fn) : ValuationOracle(n), fn_(std::move(fn)) {}

 protected:
  double Evaluate(const SellerSet& s) const override { return fn_(s); }

 private:
  Fn fn_;
};

// F(S) = f(S) * m(S) with m(S) in [1 - eps, 1 + eps] fixed by a 64-bit hash
// of (seed, sorted members). Repeated queries return identical values.
class NoisyOracle final : public ValuationOracle {
 public:
  NoisyOracle(std::shared_ptr<const ValuationOracle> base, double epsilon,
              std::uint64_t seed)
      : ValuationOracle(base->num_sellers()),
        base_(std::move(base)),
        epsilon_(epsilon),
        seed_(seed) {
    if (!(epsilon_ >= 0.0 && epsilon_ < 1.0)) {
      throw InputError("noisy oracle: epsilon must lie in [0, 1)");
    }
  }

  double epsilon() const { return epsilon_; }
  const ValuationOracle& base() const { return *base_; }

  double multiplier(const SellerSet& s) const {
    std::uint64_t h = hash_combine(seed_, s.size());
    for (SellerId i : s) h = hash_combine(h, i);
    return 1.0 - epsilon_ + 2.0 * epsilon_ * unit_interval(h);
  }

 protected:
  double Evaluate(const SellerSet& s) const override {
    return base_->value(s) * multiplier(s);
  }

 private:
  std::shared_ptr<const ValuationOracle> base_;
  double epsilon_;
  std::uint64_t seed_;
};

// Sum of costs over a set, accumulated in id order.
inline double total_cost(std::span<const double> costs, const SellerSet& s) {
  double total = 0.0;
  for (SellerId i : s) total += costs[i];
  return total;
}

// f(S) - c(S).
inline double welfare(const ValuationOracle& oracle,
                      std::span<const double> costs, const SellerSet& s) {
  return oracle.value(s) - total_cost(costs, s);
}

}  // namespace procauction
