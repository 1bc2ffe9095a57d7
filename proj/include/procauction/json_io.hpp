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

// JSON encodings of instances, traces and outcomes (nlohmann::json).

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "procauction/errors.hpp"
#include "procauction/online.hpp"
#include "procauction/sealed_bid.hpp"
#include "procauction/selection.hpp"
#include "procauction/valuation.hpp"

namespace procauction {

using Json = nlohmann::json;

inline Json to_json(const SellerSet& s) {
  return Json(std::vector<SellerId>(s.begin(), s.end()));
}

inline Json to_json(const CoverageInstance& inst) {
  return Json{{"n_sets", inst.n_sets},
              {"covers", inst.covers},
              {"vertex_values", inst.vertex_values}};
}

inline CoverageInstance coverage_from_json(const Json& j) {
  try {
    CoverageInstance inst;
    inst.n_sets = j.at("n_sets").get<std::size_t>();
    inst.covers = j.at("covers").get<std::vector<std::vector<std::size_t>>>();
    inst.vertex_values = j.at("vertex_values").get<std::vector<double>>();
    inst.Normalize();
    return inst;
  } catch (const Json::exception& e) {
    throw InputError(std::string("coverage instance JSON: ") + e.what());
  }
}

// Instance document: the coverage fields plus a "costs" array.
inline Json instance_to_json(const CoverageInstance& inst,
                             const std::vector<double>& costs) {
  Json j = to_json(inst);
  j["costs"] = costs;
  return j;
}

inline std::vector<double> costs_from_json(const Json& j) {
  try {
    return j.at("costs").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
}

// JSON has no infinity; non-finite reals are written as strings.
inline Json real_to_json(double x) {
  if (std::isfinite(x)) return Json(x);
  if (std::isnan(x)) return Json("nan");
  return Json(x > 0 ? "inf" : "-inf");
}

inline Json to_json(const SelectionTrace& t) {
  Json sets = Json::array();
  for (const auto& s : t.tentative_sets) sets.push_back(to_json(s));
  Json rounds = Json::array();
  Json scores = Json::array();
  for (std::size_t i = 0; i < t.chosen_at.size(); ++i) {
    rounds.push_back(t.chosen_at[i] ? Json(*t.chosen_at[i]) : Json(nullptr));
    scores.push_back(t.scores_at_admission[i]
                         ? real_to_json(*t.scores_at_admission[i])
                         : Json(nullptr));
  }
  return Json{{"tentative_sets", sets},
              {"chosen_at", rounds},
              {"scores_at_admission", scores},
              {"admission_order", t.admission_order}};
}

inline Json to_json(const AuctionOutcome& out, const ValuationOracle& oracle,
                    const std::vector<double>& costs, bool with_trace) {
  Json j{{"winners", to_json(out.winners)},
         {"payments", out.payments},
         {"total_payment", out.total_payment()},
         {"surplus", out.auctioneer_surplus},
         {"welfare", welfare(oracle, costs, out.winners)},
         {"oracle_queries", out.oracle_queries}};
  if (with_trace && !out.trace.tentative_sets.empty()) {
    j["trace"] = to_json(out.trace);
  }
  return j;
}

inline Json to_json(const PostedPriceOutcome& out) {
  return Json{{"winners", to_json(out.winners)},
              {"posted_prices", out.posted_prices},
              {"payments", out.payments},
              {"acceptance", out.acceptance}};
}

}  // namespace procauction
