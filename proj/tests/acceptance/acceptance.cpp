// Acceptance runner: one PASS/FAIL line per criterion. Tolerances come from
// experiments::gates; the runtime limits below are pinned here.
#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "maxmult/experiments.hpp"

namespace {

using maxmult::ExperimentConfig;
using maxmult::ExperimentReport;
namespace ex = maxmult::experiments;

struct Criterion {
  std::string description;
  double runtime_limit_s;
  std::function<std::vector<ExperimentReport>()> run;
};

std::string verdict_text(const std::vector<ExperimentReport>& reports) {
  std::string out;
  for (const auto& r : reports)
    for (const auto& v : r.verdicts()) {
      if (!out.empty()) out += "; ";
      out += fmt::format("{}/{} {}: {}", r.experiment(), v.name, v.pass ? "ok" : "FAIL", v.detail);
    }
  return out;
}

std::vector<ExperimentReport> reproducibility() {
  ExperimentConfig cfg;
  ExperimentReport rep("reproducibility", cfg.hash(), cfg.seed);
  const std::pair<const char*, std::function<ExperimentReport()>> runs[] = {
      {"selftest", [&] { return ex::selftest(cfg); }},
      {"growth", [&] { return ex::growth_experiment(cfg); }},
      {"dilation", [&] { return ex::dyadic_dilation_experiment(cfg); }},
      {"rademacher_tail", [&] { return ex::rademacher_tail_experiment(cfg); }},
  };
  for (const auto& [name, fn] : runs) {
    const auto a = fn().csv();
    const auto b = fn().csv();
    rep.add_verdict(name, a == b, fmt::format("{} bytes", a.size()));
  }
  return {rep};
}

std::vector<Criterion> criteria() {
  const ExperimentConfig cfg;
  return {
      {"exact identities", 10, [cfg] { return std::vector{ex::selftest(cfg)}; }},
      {"Rademacher tail bound", 30, [cfg] { return std::vector{ex::rademacher_tail_experiment(cfg)}; }},
      {"Rademacher family growth", 120, [cfg] { return std::vector{ex::rademacher_growth_experiment(cfg)}; }},
      {"dilated Rademacher boundedness", 120, [cfg] { return std::vector{ex::rademacher_dilated_experiment(cfg)}; }},
      {"pointwise square-function bound", 300,
       [cfg] {
         auto c = cfg;
         c.pointwise.J_values = {10, 14};
         return std::vector{ex::pointwise_experiment(c)};
       }},
      {"localized operator decay rates", 300,
       [cfg] {
         std::vector<ExperimentReport> out;
         for (const char* kind : {"D_B_minus_s", "E_B_plus_s", "T_k_bound", "E0_decay"})
           out.push_back(ex::sublemma_decay_fit(kind, cfg));
         return out;
       }},
      {"maximal multiplier growth", 600,
       [cfg] {
         auto c = cfg;
         c.J = 12;
         c.p = 2.0;
         c.kind = "signs";
         c.n_sweep = {2, 4, 8, 16, 32, 64, 128, 256};
         return std::vector{ex::growth_experiment(c)};
       }},
      {"dyadic dilation split", 300, [cfg] { return std::vector{ex::dyadic_dilation_experiment(cfg)}; }},
      {"good-lambda trend", 300, [cfg] { return std::vector{ex::good_lambda_fit(cfg)}; }},
      {"byte-identical reruns", 600, reproducibility},
  };
}

bool run_one(int n, const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ExperimentReport> reports;
  std::string detail;
  bool pass = true;
  try {
    reports = c.run();
    for (const auto& r : reports) {
      pass = pass && r.passed();
      if (const auto bad = r.first_non_finite()) {
        pass = false;
        detail += fmt::format("non-finite value in {}: {}; ", r.experiment(), *bad);
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail += fmt::format("exception: {}; ", e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds <= c.runtime_limit_s;
  pass = pass && in_time;
  detail += verdict_text(reports);
  detail += fmt::format("; runtime {:.2f} s (limit {} s){}", seconds, c.runtime_limit_s, in_time ? "" : " EXCEEDED");
  std::cout << fmt::format("[{}] criterion {}: {} | {}", pass ? "PASS" : "FAIL", n, c.description, detail) << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner", "maxmult_acceptance"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10); all when omitted")->check(CLI::Range(0, 10));
  CLI11_PARSE(app, argc, argv);

  const auto all = criteria();
  bool ok = true;
  for (int n = 1; n <= static_cast<int>(all.size()); ++n)
    if (only == 0 || only == n) ok = run_one(n, all[static_cast<std::size_t>(n - 1)]) && ok;
  return ok ? 0 : 1;
}
