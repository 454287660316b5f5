#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "maxmult/config.hpp"
#include "maxmult/experiments.hpp"
#include "maxmult/symbols.hpp"
#include "maxmult/test_bank.hpp"

namespace maxmult::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> J;
  std::vector<std::size_t> n_sweep;
  std::string out_dir;
  std::string kind;
  bool gate = false;
  int verbosity = 0;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.J) {
    cfg.J = *o.J;
    cfg.sublemma.J = *o.J;
    cfg.good_lambda.J = *o.J;
    cfg.pointwise.J_values = {*o.J};
  }
  if (!o.n_sweep.empty()) cfg.n_sweep = o.n_sweep;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') cfg.output_dir = env;
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (!o.kind.empty()) cfg.sublemma.kind = o.kind;
  cfg.validate();
  return cfg;
}

std::vector<ExperimentReport> pointwise_reports(const ExperimentConfig& cfg) {
  std::vector<ExperimentReport> out;
  out.push_back(experiments::pointwise_experiment(cfg));
  const double a_r = out.back().constant("A_r").value_or(1.0);

  experiments::SplittingInputs in;
  in.a_r = a_r;
  in.r = cfg.r;
  in.p = cfg.p;
  in.base_generation = cfg.base_generation;
  in.lambda_points = cfg.pointwise.lambda_points;
  const auto kind = cfg.kind == "phases" ? symbols::MikhlinKind::phases : symbols::MikhlinKind::signs;
  in.b = symbols::mikhlin_bound(kind, cfg.r / (cfg.r - 1.0), cfg.dim / cfg.r, experiments::analysis_grid(cfg));
  if (cfg.c_d) {
    in.c_d = *cfg.c_d;
  } else {
    out.push_back(experiments::good_lambda_fit(cfg));
    in.c_d = out.back().constant("c_d").value_or(1.0);
  }
  const Grid grid = Grid::make(cfg.dim, cfg.J);
  const auto f = random_band_signal(grid, derive_seed(cfg.seed, 1));
  const auto syms = symbols::random_mikhlin(cfg.n_sweep.back(), derive_seed(cfg.seed, 2), kind);
  auto split = experiments::splitting_quantities(cfg, syms, f, in);
  split.set_text("c_d_source", cfg.c_d ? "config" : "good_lambda_fit");
  out.push_back(std::move(split));
  return out;
}

std::vector<ExperimentReport> dispatch(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "selftest") return {experiments::selftest(cfg)};
  if (name == "growth") return {experiments::growth_experiment(cfg)};
  if (name == "pointwise") return pointwise_reports(cfg);
  if (name == "sublemma") return {experiments::sublemma_decay_fit(cfg.sublemma.kind, cfg)};
  if (name == "dilation") return {experiments::dyadic_dilation_experiment(cfg)};
  if (name == "goodlambda") return {experiments::good_lambda_fit(cfg)};
  if (name == "rademacher")
    return {experiments::rademacher_tail_experiment(cfg), experiments::rademacher_growth_experiment(cfg),
            experiments::rademacher_dilated_experiment(cfg)};
  throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal Fourier multiplier experiments", "maxmult"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON config (schema_version 1)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--J", o.J, "log2 of samples per axis, applied to every grid of the run");
  app.add_option("--n-sweep", o.n_sweep, "Symbol counts N, strictly increasing")->delimiter(',');
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_flag("--gate", o.gate, "Exit with code 3 when an acceptance verdict fails");
  app.add_flag("-v,--verbose", o.verbosity, "Print verdict details");

  const char* descriptions[][2] = {
      {"growth", "Growth of sup_i |T_i f| with the number of symbols"},
      {"pointwise", "Pointwise square-function bound and the level-set splitting"},
      {"sublemma", "Decay-rate fits of the localized operator estimates"},
      {"dilation", "Dyadic dilation maximal operator and its threshold split"},
      {"rademacher", "Rademacher tail, family supremum and dilated-sequence estimates"},
      {"goodlambda", "Good-lambda measurements and the fitted constant"},
      {"selftest", "Exact identities of the transform and the martingale"},
  };
  for (const auto& [name, text] : descriptions) {
    auto* sub = app.add_subcommand(name, text);
    if (std::string(name) == "sublemma")
      sub->add_option("--kind", o.kind, "D_B_minus_s, E_B_plus_s, T_k_bound or E0_decay");
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = load(o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  std::vector<ExperimentReport> reports;
  try {
    reports = dispatch(name, cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  for (const auto& r : reports) {
    if (const auto bad = r.first_non_finite()) {
      err << "error: non-finite measurement in " << r.experiment() << ": " << *bad << "\n";
      return kNonFinite;
    }
  }
  bool all_pass = true;
  for (const auto& r : reports) {
    r.write(cfg.output_dir);
    all_pass = all_pass && r.passed();
    out << r.experiment() << ": " << (r.passed() ? "PASS" : "FAIL") << " -> " << cfg.output_dir << "/"
        << r.experiment() << ".csv\n";
    if (o.verbosity > 0)
      for (const auto& v : r.verdicts()) out << "  " << (v.pass ? "ok   " : "fail ") << v.name << ": " << v.detail << "\n";
  }
  return (o.gate && !all_pass) ? kGateFailure : kOk;
}

}  // namespace maxmult::cli
