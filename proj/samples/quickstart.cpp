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

// A buyer procures coverage from three sellers. Runs the sealed-bid greedy
// auction, its lazy variant, VCG and a posted-price auction, and prints
// winners, payments and welfare.

#include <cstdio>
#include <string>
#include <vector>

#include "procauction/procauction.hpp"

namespace pa = procauction;

namespace {

void Print(const char* name, const pa::SellerSet& winners,
           const std::vector<double>& payments, double welfare) {
  std::printf("%-22s winners %-8s payments", name,
              pa::to_string(winners).c_str());
  for (double p : payments) std::printf(" %6.3f", p);
  std::printf("   welfare %.3f\n", welfare);
}

}  // namespace

int main() {
  // Seller 0 covers {a, b}, seller 1 covers {b, c}, seller 2 covers {c}.
  pa::CoverageInstance inst;
  inst.n_sets = 3;
  inst.covers = {{0, 1}, {1, 2}, {2}};
  inst.vertex_values = {2.0, 3.0, 1.5};
  inst.Normalize();
  const pa::CoverageOracle f(inst);
  const std::vector<double> bids = {1.0, 2.5, 0.5};

  for (pa::RuleKind kind : {pa::RuleKind::kGreedyMargin, pa::RuleKind::kCostScaled,
                            pa::RuleKind::kDistortedGreedy}) {
    const pa::ScoringRule rule = pa::ScoringRule::Of(kind);
    const pa::AuctionOutcome out = pa::run_sealed_bid(rule, f, bids);
    Print(std::string(rule.name()).c_str(), out.winners, out.payments,
          pa::welfare(f, bids, out.winners));
    if (rule.diminishing_return()) {
      const pa::AuctionOutcome lazy = pa::run_sealed_bid_lazy(rule, f, bids);
      if (lazy.winners != out.winners || lazy.payments != out.payments) {
        std::fprintf(stderr, "lazy and naive outcomes differ\n");
        return 1;
      }
    }
  }

  const pa::AuctionOutcome vcg = pa::run_vcg(f, bids);
  Print("vcg", vcg.winners, vcg.payments, pa::welfare(f, bids, vcg.winners));

  const pa::PostedPriceOutcome posted = pa::run_posted_price(
      pa::ScoringRule::Of(pa::RuleKind::kCostScaled), f, bids,
      pa::ArrivalOrder::Reverse(3));
  Print("posted-price (reverse)", posted.winners, posted.payments,
        pa::welfare(f, bids, posted.winners));

  // VCG pays winners at least their bids and never more than f(winners).
  if (!pa::verify_ir(vcg, bids).ok() || !pa::verify_nas(vcg, f)) return 1;
  return 0;
}
