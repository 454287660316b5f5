#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "maxmult/experiments.hpp"
#include "maxmult/rademacher.hpp"
#include "maxmult/test_bank.hpp"

namespace maxmult::experiments {

namespace {

std::vector<double> unit_gaussian_row(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(n);
  double s = 0.0;
  for (auto& v : a) {
    v = g(rng);
    s += v * v;
  }
  for (auto& v : a) v /= std::sqrt(s);
  return a;
}

}  // namespace

ExperimentReport rademacher_tail_experiment(const ExperimentConfig& cfg) {
  using namespace rademacher;
  const auto& rc = cfg.rademacher;
  ExperimentReport rep("rademacher_tail", cfg.hash(), cfg.seed);
  const auto sys = RademacherSystem::exact(rc.tail_n);
  std::size_t violations = 0;
  std::size_t checks = 0;
  double tightest = 0.0;
  for (int t = 0; t < rc.tail_trials; ++t) {
    const auto a = unit_gaussian_row(static_cast<std::size_t>(rc.tail_n), derive_seed(cfg.seed, 200 + t));
    double l1 = 0.0;
    for (double v : a) l1 += std::abs(v);
    // Levels from a small fraction of the range up to its end, where the tail is empty.
    std::vector<double> lambdas;
    for (int i = 1; i <= rc.tail_lambdas; ++i) lambdas.push_back(l1 * i / rc.tail_lambdas);
    for (const auto& c : tail_check(a, sys, lambdas)) {
      rep.add(fmt::format("tail_{}", t), "lambda", c.lambda, c.empirical, c.bound);
      ++checks;
      if (!c.holds()) ++violations;
      tightest = std::max(tightest, c.empirical / c.bound);
    }
  }
  rep.set_constant("checks", static_cast<double>(checks));
  rep.set_constant("violations", static_cast<double>(violations));
  rep.set_constant("max_empirical_over_bound", tightest);
  rep.add_verdict("tail_bound", violations == 0,
                  fmt::format("{} violations in {} exhaustive checks", violations, checks));
  return rep;
}

ExperimentReport rademacher_growth_experiment(const ExperimentConfig& cfg) {
  using namespace rademacher;
  const auto& rc = cfg.rademacher;
  ExperimentReport rep("rademacher_growth", cfg.hash(), cfg.seed);
  const auto sys = RademacherSystem::sampled(rc.row_length, rc.patterns, derive_seed(cfg.seed, 300));
  std::vector<Row> rows;
  for (std::size_t i = 0; i < rc.n_sweep.back(); ++i) {
    const auto a = unit_gaussian_row(static_cast<std::size_t>(rc.row_length), derive_seed(cfg.seed, 10000 + i));
    rows.emplace_back(a.begin(), a.end());
  }
  const auto est = family_sup_norm_prefixes(rows, sys, 2.0, rc.n_sweep);
  double hi = 0.0, lo = kInfinity;
  for (std::size_t c = 0; c < rc.n_sweep.size(); ++c) {
    const auto n = static_cast<double>(rc.n_sweep[c]);
    const double env = std::sqrt(std::log(n + 1.0));
    rep.add("R", "N", n, est[c].value, 1.0);
    rep.add("R_over_sqrt_log", "N", n, est[c].value, env);
    rep.add("R_std_error", "N", n, est[c].std_error, 1.0);
    if (rc.n_sweep[c] >= 8) {
      hi = std::max(hi, est[c].value / env);
      lo = std::min(lo, est[c].value / env);
    }
  }
  const double spread = hi / lo;
  rep.set_constant("normalized_spread", spread);
  rep.add_verdict("sqrt_log_growth", std::isfinite(spread) && spread <= gates::kRademacherGrowthSpread,
                  fmt::format("max/min over N >= 8 of R(N)/sqrt(log(N+1)) = {} (limit {})", format_number(spread),
                              gates::kRademacherGrowthSpread));
  return rep;
}

ExperimentReport rademacher_dilated_experiment(const ExperimentConfig& cfg) {
  using namespace rademacher;
  const auto& rc = cfg.rademacher;
  ExperimentReport rep("rademacher_dilated", cfg.hash(), cfg.seed);
  std::vector<double> ratios;
  std::vector<double> constants;
  double mismatch = 0.0;
  std::size_t padded = 0;
  for (int n : rc.lengths) {
    const auto a = unit_gaussian_row(static_cast<std::size_t>(n), derive_seed(cfg.seed, 400 + n));
    // b covers every index j - k with 1 <= j <= n and |k| <= window, so nothing is padded.
    IndexedSequence b;
    b.offset = -(static_cast<long>(n) + rc.window);
    for (long l = b.offset; l <= -b.offset; ++l) b.values.push_back(1.0 / std::sqrt(std::log(std::labs(l) + 2.0)));
    const auto sys = RademacherSystem::sampled(n, rc.patterns, derive_seed(cfg.seed, 500 + n));
    const auto res = dilated_sup_norm(b, a, sys, -rc.window, rc.window);
    double a2 = 0.0;
    for (double v : a) a2 += v * v;
    rep.add("sup_norm", "length", n, res.norm.value, std::sqrt(a2));
    rep.add("sup_norm_std_error", "length", n, res.norm.std_error, 1.0);
    rep.add("rearrangement_constant", "length", n, res.rearrangement_constant, 1.0);
    ratios.push_back(res.norm.value / std::sqrt(a2));
    constants.push_back(res.rearrangement_constant);
    double c2 = 0.0;
    for (double c : res.c) c2 = std::max(c2, c * c);
    mismatch = std::max(mismatch, res.calderon_mismatch / std::max(c2, 1e-300));
    padded += res.padded_pairs;
  }
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double c1 = *std::max_element(constants.begin(), constants.end());
  const double c1_lo = *std::min_element(constants.begin(), constants.end());
  rep.set_constant("ratio_spread", hi / lo);
  rep.set_constant("C1", c1);
  rep.set_constant("C1_spread", c1 / c1_lo);
  rep.set_constant("calderon_relative_mismatch", mismatch);
  rep.set_constant("padded_pairs", static_cast<double>(padded));
  rep.add_verdict("bounded_across_lengths", hi / lo <= gates::kDilatedSpread,
                  fmt::format("max/min of ||sup_k|H_k|||_2/||a||_2 = {} (limit {})", format_number(hi / lo),
                              gates::kDilatedSpread));
  // One constant C1 = max over lengths; it must bound every length without degenerating.
  const bool single = std::isfinite(c1) && c1 / c1_lo <= gates::kDilatedSpread && mismatch <= 1e-10;
  rep.add_verdict("rearrangement_bound", single,
                  fmt::format("C1 = {}, spread across lengths {}, Calderon route mismatch {}", format_number(c1),
                              format_number(c1 / c1_lo), format_number(mismatch)));
  return rep;
}

}  // namespace maxmult::experiments
