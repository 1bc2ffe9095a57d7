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

// procauction command-line front end.
//
// Exit status: 0 pass, 1 property failure, 2 usage or input error,
// 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "procauction/procauction.hpp"

namespace pa = procauction;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitProperty = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void WriteTo(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw pa::FileError("cannot write '" + path + "'");
  fn(out);
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string p; std::getline(in, p, sep);) parts.push_back(p);
  return parts;
}

std::uint64_t ParseU64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw pa::InputError(std::string("bad ") + what + " '" + s + "'");
}

// identity | reverse | random:<seed> | comma-separated permutation.
pa::ArrivalOrder ParseOrder(const std::string& text, std::size_t n) {
  if (text == "identity") return pa::ArrivalOrder::Identity(n);
  if (text == "reverse") return pa::ArrivalOrder::Reverse(n);
  if (text.rfind("random:", 0) == 0) {
    return pa::ArrivalOrder::Random(n, ParseU64(text.substr(7), "seed"));
  }
  std::vector<pa::SellerId> seq;
  for (const auto& p : Split(text, ',')) seq.push_back(ParseU64(p, "seller id"));
  return pa::ArrivalOrder(std::move(seq));
}

// lex | rr | random:<seed> | script:<id>,<id>,...
std::unique_ptr<pa::Schedule> ParseSchedule(const std::string& text) {
  if (text == "lex") return std::make_unique<pa::LexicographicSchedule>();
  if (text == "rr") return std::make_unique<pa::RoundRobinSchedule>();
  if (text.rfind("random:", 0) == 0) {
    return std::make_unique<pa::RandomSchedule>(
        ParseU64(text.substr(7), "seed"));
  }
  if (text.rfind("script:", 0) == 0) {
    std::vector<pa::SellerId> script;
    for (const auto& p : Split(text.substr(7), ',')) {
      script.push_back(ParseU64(p, "seller id"));
    }
    return std::make_unique<pa::ScriptedSchedule>(std::move(script));
  }
  throw pa::InputError("unknown schedule '" + text + "'");
}

pa::Json ReportJson(const pa::SuiteReport& r) {
  return pa::Json{{"suite", r.name},
                  {"checks", r.checks},
                  {"violations", r.failure_count()},
                  {"pass", r.ok()},
                  {"failures", r.failures},
                  {"notes", r.notes}};
}

void PrintReport(const pa::SuiteReport& r) {
  std::printf("%s: %s (%zu checks, %zu violations)\n", r.name.c_str(),
              r.ok() ? "pass" : "FAIL", r.checks, r.failure_count());
  for (const auto& f : r.failures) std::printf("  violation: %s\n", f.c_str());
  for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string dataset;
  std::string csv;
  std::string timing_csv;
  std::string summary_csv;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> instances;
  std::optional<std::uint64_t> seed;
};

pa::HarnessConfig LoadConfig(const ExperimentArgs& a) {
  pa::HarnessConfig cfg =
      a.config.empty() ? pa::HarnessConfig{} : pa::load_harness_config(a.config);
  if (!a.dataset.empty()) cfg.dataset = a.dataset;
  if (!a.csv.empty()) cfg.csv = a.csv;
  if (!a.timing_csv.empty()) cfg.timing_csv = a.timing_csv;
  if (!a.summary_csv.empty()) cfg.summary_csv = a.summary_csv;
  if (a.workers) cfg.workers = *a.workers;
  if (a.instances) cfg.instances = *a.instances;
  if (a.seed) cfg.seed = *a.seed;
  return cfg;
}

int CmdExperiment(const ExperimentArgs& a) {
  const pa::HarnessConfig cfg = LoadConfig(a);
  const pa::BipartiteGraph graph = pa::load_graph(cfg);
  const auto records = pa::run_experiment(graph, cfg);
  WriteTo(cfg.csv, [&](std::ostream& o) { pa::write_records_csv(o, records); });
  if (!cfg.timing_csv.empty()) {
    WriteTo(cfg.timing_csv,
            [&](std::ostream& o) { pa::write_timing_csv(o, records); });
  }
  const pa::ExperimentSummary sum = pa::summarize(records);
  if (!cfg.summary_csv.empty()) {
    WriteTo(cfg.summary_csv,
            [&](std::ostream& o) { pa::write_summary_csv(o, sum); });
  }
  pa::print_summary(std::cerr, sum);
  return kExitPass;
}

int CmdBench(const ExperimentArgs& a) {
  const pa::HarnessConfig cfg = LoadConfig(a);
  const pa::BipartiteGraph graph = pa::load_graph(cfg);
  const auto records = pa::run_bench(graph, cfg);
  WriteTo(cfg.csv, [&](std::ostream& o) { pa::write_bench_csv(o, records); });
  return kExitPass;
}

struct VerifyArgs {
  std::string suite;
  std::size_t trials = 200;
  std::uint64_t seed = 7;
  std::string fixture;
  std::string json;
};

int CmdVerify(const VerifyArgs& a) {
  pa::SuiteReport report;
  pa::Json extra;
  const std::string& s = a.suite;
  if (s == "ic" || s == "ir" || s == "nas" || s == "feasibility") {
    pa::FeasibilityOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    opt.check_ic = s == "ic" || s == "feasibility";
    opt.check_ir = s == "ir" || s == "feasibility";
    opt.check_nas = s == "nas" || s == "feasibility";
    if (a.fixture == "first-price") {
      opt.first_price_fixture = true;
    } else if (!a.fixture.empty()) {
      throw pa::InputError("unknown fixture '" + a.fixture + "'");
    }
    report = pa::feasibility_suite(opt);
    report.name = s;
  } else if (s == "critical-bid") {
    pa::CriticalBidOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    report = pa::critical_bid_suite(opt);
  } else if (s == "guarantees") {
    pa::GuaranteeOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    const auto res = pa::guarantee_suite(opt);
    report = res.report;
    std::printf("distorted greedy: smallest margin per beta\n");
    const auto betas = pa::beta_grid();
    pa::Json table = pa::Json::array();
    for (std::size_t b = 0; b < betas.size(); ++b) {
      std::printf("  beta=%.2f  margin=%.9g\n", betas[b],
                  res.distorted_min_margin[b]);
      table.push_back({{"beta", betas[b]},
                       {"min_margin", pa::real_to_json(res.distorted_min_margin[b])}});
    }
    extra["beta_margins"] = table;
  } else if (s == "stochastic") {
    pa::StochasticOptions opt;
    opt.instances = a.trials;
    opt.seed = a.seed;
    report = pa::stochastic_guarantee_suite(opt);
  } else if (s == "vcg") {
    pa::VcgOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    report = pa::vcg_suite(opt);
  } else if (s == "lazy-equivalence") {
    pa::LazyOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    report = pa::lazy_equivalence_suite(opt);
  } else if (s == "online-equivalence") {
    pa::OnlineOptions opt;
    opt.pairs = a.trials;
    opt.guarantee_instances = std::max<std::size_t>(1, a.trials / 5);
    opt.seed = a.seed;
    report = pa::online_suite(opt);
  } else if (s == "descending") {
    pa::DescendingOptions opt;
    opt.instances = a.trials;
    opt.seed = a.seed;
    report = pa::descending_suite(opt);
  } else {
    throw pa::InputError("unknown suite '" + s + "'");
  }
  PrintReport(report);
  if (!a.json.empty()) {
    pa::Json j = ReportJson(report);
    if (!extra.is_null()) j.update(extra);
    WriteTo(a.json, [&](std::ostream& o) { o << j.dump(2) << "\n"; });
  }
  return report.ok() ? kExitPass : kExitProperty;
}

int CmdLowerBound(std::size_t L, std::optional<double> epsilon) {
  const double eps = epsilon.value_or(1.0 / (2.0 * static_cast<double>(L)));
  const pa::LowerBoundResult r = pa::lower_bound_demo(L, eps);
  std::printf("L=%zu epsilon=%g\n", r.L, r.epsilon);
  std::printf("  exact demand oracle:       welfare %.9g (%zu price steps)\n",
              r.exact_welfare, r.exact_iterations);
  std::printf("  cost-scaled demand oracle: welfare %.9g (%zu price steps)\n",
              r.cost_scaled_welfare, r.cost_scaled_iterations);
  std::printf("  optimum:                   welfare %.9g\n", r.opt_welfare);
  return kExitPass;
}

struct GenArgs {
  std::size_t n = 10;
  std::uint64_t seed = 1;
  std::string dataset;
  double s = 1.0;
  std::uint64_t index = 0;
  std::string out;
};

int CmdGenInstance(const GenArgs& a) {
  pa::Json j;
  if (a.dataset.empty()) {
    const pa::RandomInstance r = pa::random_instance(a.n, a.seed);
    j = pa::instance_to_json(*r.coverage, r.costs);
  } else {
    pa::HarnessConfig hc;
    hc.dataset = a.dataset;
    const pa::BipartiteGraph graph = pa::load_graph(hc);
    pa::ExperimentConfig ec;
    ec.n = a.n;
    ec.s = a.s;
    ec.seed = a.seed;
    const pa::GeneratedInstance g = pa::build_instance(graph, ec, a.index);
    j = pa::instance_to_json(*g.coverage, g.costs);
    j["kappa"] = g.kappa;
    j["source_nodes"] = g.source_nodes;
  }
  WriteTo(a.out, [&](std::ostream& o) { o << j.dump() << "\n"; });
  return kExitPass;
}

struct RunArgs {
  std::string instance;
  std::string mechanism = "sealed-bid";
  std::string rule = "greedy-margin";
  std::uint64_t seed = 0;
  bool trace = false;
  std::string oracle = "cost-scaled";
  std::string schedule = "rr";
  double epsilon = 0.01;
  std::string order = "identity";
  double noise_epsilon = 0.05;
};

int CmdRun(const RunArgs& a) {
  std::ifstream in(a.instance);
  if (!in) throw pa::FileError("cannot open instance '" + a.instance + "'");
  pa::Json doc;
  try {
    doc = pa::Json::parse(in);
  } catch (const pa::Json::parse_error& e) {
    throw pa::InputError(std::string("instance JSON: ") + e.what());
  }
  const auto base = std::make_shared<const pa::CoverageOracle>(
      pa::coverage_from_json(doc));
  const std::vector<double> costs = pa::costs_from_json(doc);
  pa::check_bids(*base, costs);
  pa::ScoringRule rule = pa::ScoringRule::Parse(a.rule);
  std::shared_ptr<const pa::ValuationOracle> oracle = base;
  if (rule.kind == pa::RuleKind::kNoisyDistortedGreedy) {
    rule = pa::ScoringRule::Noisy(a.noise_epsilon);
    oracle = std::make_shared<const pa::NoisyOracle>(base, a.noise_epsilon,
                                                     a.seed);
  }
  const pa::RandomSeed seed(a.seed);
  const std::size_t n = costs.size();
  pa::Json out;
  const std::string& m = a.mechanism;
  if (m == "sealed-bid" || m == "sealed-bid-lazy") {
    const auto res = m == "sealed-bid"
                         ? pa::run_sealed_bid(rule, *oracle, costs, seed)
                         : pa::run_sealed_bid_lazy(rule, *oracle, costs, seed);
    out = pa::to_json(res, *base, costs, a.trace);
  } else if (m == "vcg") {
    out = pa::to_json(pa::run_vcg(*base, costs), *base, costs, false);
  } else if (m == "posted-price") {
    const auto res =
        pa::run_posted_price(rule, *oracle, costs, ParseOrder(a.order, n));
    out = pa::to_json(res);
    out["welfare"] = pa::welfare(*base, costs, res.winners);
  } else if (m == "descending-online") {
    const auto res = pa::run_descending_from_online(rule, *oracle, costs,
                                                    ParseOrder(a.order, n));
    out = pa::to_json(res.auction, *base, costs, false);
    out["iterations"] = res.iterations;
  } else if (m == "descending") {
    std::unique_ptr<pa::DemandOracle> demand;
    if (a.oracle == "exact") {
      demand = std::make_unique<pa::ExactDemandOracle>(*base);
    } else if (a.oracle == "cost-scaled") {
      demand = std::make_unique<pa::CostScaledDemandOracle>();
    } else {
      throw pa::InputError("unknown demand oracle '" + a.oracle + "'");
    }
    auto schedule = ParseSchedule(a.schedule);
    const auto res =
        pa::run_descending(*base, costs, *demand, *schedule, a.epsilon);
    out = pa::to_json(res.auction, *base, costs, false);
    out["iterations"] = res.iterations;
  } else {
    throw pa::InputError("unknown mechanism '" + m + "'");
  }
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

int CmdFetch(const std::string& dest, const std::string& url) {
  if (std::filesystem::exists(dest)) {
    std::printf("%s already exists\n", dest.c_str());
    return kExitPass;
  }
  const auto parent = std::filesystem::path(dest).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::string cmd = "curl -fsSL '" + url + "' | gunzip -c > '" + dest +
                          ".part' && mv '" + dest + ".part' '" + dest + "'";
  std::printf("%s\n", cmd.c_str());
  if (std::system(cmd.c_str()) != 0) {
    std::filesystem::remove(dest + ".part");
    throw pa::FileError("download failed: " + url);
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procurement auctions for regularized submodular welfare"};
  app.require_subcommand(1);

  ExperimentArgs exp;
  auto add_experiment_flags = [&](CLI::App* sub) {
    sub->add_option("-c,--config", exp.config, "JSON config file");
    sub->add_option("--dataset", exp.dataset,
                    "edge-list path, or 'synthetic'");
    sub->add_option("--csv", exp.csv, "output CSV (default stdout)");
    sub->add_option("--workers", exp.workers, "worker threads");
    sub->add_option("--instances", exp.instances, "instances per (n, s)");
    sub->add_option("--seed", exp.seed, "config seed");
  };
  auto* experiment = app.add_subcommand("experiment", "run a mechanism x rule matrix");
  add_experiment_flags(experiment);
  experiment->add_option("--timing-csv", exp.timing_csv, "wall-time CSV");
  experiment->add_option("--summary-csv", exp.summary_csv, "bucket summary CSV");

  auto* bench = app.add_subcommand("bench", "runtime and oracle queries per n");
  add_experiment_flags(bench);

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify
      ->add_option("suite", ver.suite,
                   "ic, ir, nas, feasibility, critical-bid, guarantees, "
                   "stochastic, vcg, lazy-equivalence, online-equivalence, "
                   "descending")
      ->required();
  verify->add_option("--trials", ver.trials, "instances");
  verify->add_option("--seed", ver.seed, "seed");
  verify->add_option("--fixture", ver.fixture,
                     "'first-price': pay-your-bid control (ic, ir, nas)");
  verify->add_option("--json", ver.json, "write the report as JSON");

  std::size_t L = 10;
  std::optional<double> lb_eps;
  auto* lower = app.add_subcommand("lowerbound", "descending lower-bound family");
  lower->add_option("-L,--L", L, "regular sellers")->check(CLI::PositiveNumber);
  lower->add_option("--epsilon", lb_eps, "price step, below 1/L (default 1/(2L))");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-instance", "write an instance as JSON");
  gen_cmd->add_option("--n", gen.n, "sellers")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "seed");
  gen_cmd->add_option("--dataset", gen.dataset,
                      "edge-list path or 'synthetic' (default: random instance)");
  gen_cmd->add_option("--s", gen.s, "cost scale s >= 1");
  gen_cmd->add_option("--index", gen.index, "instance index");
  gen_cmd->add_option("-o,--out", gen.out, "output file (default stdout)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run one mechanism on an instance");
  run_cmd->add_option("instance", run.instance, "instance JSON")->required();
  run_cmd->add_option("-m,--mechanism", run.mechanism,
                      "sealed-bid, sealed-bid-lazy, vcg, posted-price, "
                      "descending-online, descending");
  run_cmd->add_option("-r,--rule", run.rule, "scoring rule");
  run_cmd->add_option("--seed", run.seed, "seed for randomized rules");
  run_cmd->add_flag("--trace", run.trace, "include the selection trace");
  run_cmd->add_option("--oracle", run.oracle, "demand oracle: exact, cost-scaled");
  run_cmd->add_option("--schedule", run.schedule,
                      "lex, rr, random:<seed>, script:<ids>");
  run_cmd->add_option("--epsilon", run.epsilon, "descending price step");
  run_cmd->add_option("--order", run.order,
                      "identity, reverse, random:<seed>, or ids");
  run_cmd->add_option("--noise", run.noise_epsilon, "noisy-distorted epsilon");

  std::string dest = "data/wiki-Vote.txt";
  std::string url = "https://snap.stanford.edu/data/wiki-Vote.txt.gz";
  auto* fetch = app.add_subcommand("fetch-dataset", "download wiki-Vote with curl");
  fetch->add_option("--dest", dest, "destination file");
  fetch->add_option("--url", url, "source URL (gzip)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*experiment) return CmdExperiment(exp);
    if (*bench) return CmdBench(exp);
    if (*verify) return CmdVerify(ver);
    if (*lower) return CmdLowerBound(L, lb_eps);
    if (*gen_cmd) return CmdGenInstance(gen);
    if (*run_cmd) return CmdRun(run);
    if (*fetch) return CmdFetch(dest, url);
  } catch (const pa::InternalError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitProperty;
  } catch (const pa::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
