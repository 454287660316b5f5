#include "maxmult/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "maxmult/report.hpp"

namespace maxmult {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + where + key + "' has the wrong type: " + e.what());
  }
}

template <typename T>
void require_increasing(const std::vector<T>& v, const std::string& name) {
  if (v.empty()) throw ConfigError(name + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError(name + " must be strictly increasing");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

json to_json_value(const ExperimentConfig& c, bool with_output) {
  json j;
  j["schema_version"] = ExperimentConfig::kSchemaVersion;
  j["seed"] = c.seed;
  j["J"] = c.J;
  j["dim"] = c.dim;
  j["r"] = c.r;
  j["p"] = c.p;
  j["q"] = c.q;
  j["n_sweep"] = c.n_sweep;
  j["kind"] = c.kind;
  j["analysis_log2_extent"] = c.analysis_log2_extent;
  j["base_generation"] = c.base_generation;
  j["c_d"] = c.c_d ? json(*c.c_d) : json(nullptr);
  j["bank"] = {{"random", c.bank.random}, {"packets", c.bank.packets}, {"indicators", c.bank.indicators}};
  j["pointwise"] = {{"J_values", c.pointwise.J_values},
                    {"symbol_count", c.pointwise.symbol_count},
                    {"lambda_points", c.pointwise.lambda_points}};
  j["sublemma"] = {{"kind", c.sublemma.kind}, {"J", c.sublemma.J}, {"signals", c.sublemma.signals}};
  j["good_lambda"] = {{"trials", c.good_lambda.trials},
                      {"J", c.good_lambda.J},
                      {"eps", c.good_lambda.eps},
                      {"lambda_factors", c.good_lambda.lambda_factors},
                      {"aux_eps", c.good_lambda.aux_eps}};
  j["dilation"] = {{"octaves", c.dilation.octaves},
                   {"widths", c.dilation.widths},
                   {"q", c.dilation.q},
                   {"alpha", c.dilation.alpha}};
  j["rademacher"] = {{"tail_n", c.rademacher.tail_n},
                     {"tail_trials", c.rademacher.tail_trials},
                     {"tail_lambdas", c.rademacher.tail_lambdas},
                     {"row_length", c.rademacher.row_length},
                     {"patterns", c.rademacher.patterns},
                     {"n_sweep", c.rademacher.n_sweep},
                     {"window", c.rademacher.window},
                     {"lengths", c.rademacher.lengths}};
  if (with_output) j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"schema_version", "seed", "J", "dim", "r", "p", "q", "n_sweep", "kind", "analysis_log2_extent",
                  "base_generation", "c_d", "bank", "pointwise", "sublemma", "good_lambda", "dilation", "rademacher",
                  "output_dir"},
                 "");
  if (!j.contains("schema_version")) throw ConfigError("config is missing schema_version");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion)
    throw ConfigError("unsupported config schema_version (expected 1)");

  ExperimentConfig c;
  read(j, "seed", c.seed, "");
  read(j, "J", c.J, "");
  read(j, "dim", c.dim, "");
  read(j, "r", c.r, "");
  read(j, "p", c.p, "");
  read(j, "q", c.q, "");
  read(j, "n_sweep", c.n_sweep, "");
  read(j, "kind", c.kind, "");
  read(j, "analysis_log2_extent", c.analysis_log2_extent, "");
  read(j, "base_generation", c.base_generation, "");
  if (j.contains("c_d") && !j.at("c_d").is_null()) {
    double v = 0.0;
    read(j, "c_d", v, "");
    c.c_d = v;
  }
  read(j, "output_dir", c.output_dir, "");
  if (j.contains("bank")) {
    const auto& b = j.at("bank");
    reject_unknown(b, {"random", "packets", "indicators"}, "bank.");
    read(b, "random", c.bank.random, "bank.");
    read(b, "packets", c.bank.packets, "bank.");
    read(b, "indicators", c.bank.indicators, "bank.");
  }
  if (j.contains("pointwise")) {
    const auto& b = j.at("pointwise");
    reject_unknown(b, {"J_values", "symbol_count", "lambda_points"}, "pointwise.");
    read(b, "J_values", c.pointwise.J_values, "pointwise.");
    read(b, "symbol_count", c.pointwise.symbol_count, "pointwise.");
    read(b, "lambda_points", c.pointwise.lambda_points, "pointwise.");
  }
  if (j.contains("sublemma")) {
    const auto& b = j.at("sublemma");
    reject_unknown(b, {"kind", "J", "signals"}, "sublemma.");
    read(b, "kind", c.sublemma.kind, "sublemma.");
    read(b, "J", c.sublemma.J, "sublemma.");
    read(b, "signals", c.sublemma.signals, "sublemma.");
  }
  if (j.contains("good_lambda")) {
    const auto& b = j.at("good_lambda");
    reject_unknown(b, {"trials", "J", "eps", "lambda_factors", "aux_eps"}, "good_lambda.");
    read(b, "trials", c.good_lambda.trials, "good_lambda.");
    read(b, "J", c.good_lambda.J, "good_lambda.");
    read(b, "eps", c.good_lambda.eps, "good_lambda.");
    read(b, "lambda_factors", c.good_lambda.lambda_factors, "good_lambda.");
    read(b, "aux_eps", c.good_lambda.aux_eps, "good_lambda.");
  }
  if (j.contains("dilation")) {
    const auto& b = j.at("dilation");
    reject_unknown(b, {"octaves", "widths", "q", "alpha"}, "dilation.");
    read(b, "octaves", c.dilation.octaves, "dilation.");
    read(b, "widths", c.dilation.widths, "dilation.");
    read(b, "q", c.dilation.q, "dilation.");
    read(b, "alpha", c.dilation.alpha, "dilation.");
  }
  if (j.contains("rademacher")) {
    const auto& b = j.at("rademacher");
    reject_unknown(b,
                   {"tail_n", "tail_trials", "tail_lambdas", "row_length", "patterns", "n_sweep", "window", "lengths"},
                   "rademacher.");
    read(b, "tail_n", c.rademacher.tail_n, "rademacher.");
    read(b, "tail_trials", c.rademacher.tail_trials, "rademacher.");
    read(b, "tail_lambdas", c.rademacher.tail_lambdas, "rademacher.");
    read(b, "row_length", c.rademacher.row_length, "rademacher.");
    read(b, "patterns", c.rademacher.patterns, "rademacher.");
    read(b, "n_sweep", c.rademacher.n_sweep, "rademacher.");
    read(b, "window", c.rademacher.window, "rademacher.");
    read(b, "lengths", c.rademacher.lengths, "rademacher.");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

void ExperimentConfig::validate() const {
  require(dim == 1 || dim == 2, "dim must be 1 or 2");
  const int max_j = dim == 1 ? 22 : 12;
  auto grid_ok = [&](int j, const std::string& name) {
    require(j >= 6 && j <= max_j, name + " must lie in [6, " + std::to_string(max_j) + "]");
  };
  grid_ok(J, "J");
  require(r > 1.0 && r < 2.0, "r must satisfy 1 < r < 2");
  require(p >= 2.0 && std::isfinite(p), "p must satisfy 2 <= p < infinity");
  require(q >= 1.0 && std::isfinite(q), "q must be finite and >= 1");
  require_increasing(n_sweep, "n_sweep");
  require(n_sweep.front() >= 1, "n_sweep entries must be >= 1");
  require(kind == "signs" || kind == "phases", "kind must be 'signs' or 'phases'");
  require(analysis_log2_extent >= 4 && analysis_log2_extent <= (dim == 1 ? 14 : 8),
          "analysis_log2_extent out of range");
  require(base_generation >= 0 && base_generation < J - 4, "base_generation must lie in [0, J - 4)");
  if (c_d) require(*c_d > 0.0 && std::isfinite(*c_d), "c_d must be positive");
  require(bank.random >= 0 && bank.packets >= 0 && bank.indicators >= 0 && bank.total() >= 1,
          "bank counts must be nonnegative with at least one signal");
  require_increasing(pointwise.J_values, "pointwise.J_values");
  for (int j : pointwise.J_values) grid_ok(j, "pointwise.J_values");
  require(pointwise.symbol_count >= 1, "pointwise.symbol_count must be >= 1");
  require(pointwise.lambda_points >= 2, "pointwise.lambda_points must be >= 2");
  require(sublemma.kind == "D_B_minus_s" || sublemma.kind == "E_B_plus_s" || sublemma.kind == "T_k_bound" ||
              sublemma.kind == "E0_decay",
          "sublemma.kind must be one of D_B_minus_s, E_B_plus_s, T_k_bound, E0_decay");
  grid_ok(sublemma.J, "sublemma.J");
  require(sublemma.J >= 12, "sublemma.J must be >= 12 to host the octave sweeps");
  require(sublemma.signals >= 1, "sublemma.signals must be >= 1");
  require(good_lambda.trials >= 1, "good_lambda.trials must be >= 1");
  grid_ok(good_lambda.J, "good_lambda.J");
  for (double e : good_lambda.eps) require(e > 0.0 && e < 1.0, "good_lambda.eps entries must lie in (0, 1)");
  for (double e : good_lambda.aux_eps) require(e > 0.0 && e < 1.0, "good_lambda.aux_eps entries must lie in (0, 1)");
  require(good_lambda.eps.size() >= 2, "good_lambda.eps needs at least two values");
  require(!good_lambda.lambda_factors.empty(), "good_lambda.lambda_factors must not be empty");
  for (double l : good_lambda.lambda_factors) require(l > 0.0, "good_lambda.lambda_factors must be positive");
  require(dilation.octaves >= 2 && dilation.octaves <= 128, "dilation.octaves must lie in [2, 128]");
  require_increasing(dilation.widths, "dilation.widths");
  for (int w : dilation.widths) require(w >= 2 && w <= 256, "dilation.widths must lie in [2, 256]");
  require(dilation.q >= 1.0 && dilation.alpha >= 0.0, "dilation exponents out of range");
  require(rademacher.tail_n >= 1 && rademacher.tail_n <= 20, "rademacher.tail_n must lie in [1, 20]");
  require(rademacher.tail_trials >= 1 && rademacher.tail_lambdas >= 1, "rademacher tail counts must be >= 1");
  require(rademacher.row_length >= 1 && rademacher.patterns >= 2, "rademacher sizes out of range");
  require_increasing(rademacher.n_sweep, "rademacher.n_sweep");
  require(rademacher.n_sweep.front() >= 1, "rademacher.n_sweep entries must be >= 1");
  require(rademacher.window >= 0, "rademacher.window must be >= 0");
  require_increasing(rademacher.lengths, "rademacher.lengths");
  require(rademacher.lengths.front() >= 1, "rademacher.lengths entries must be >= 1");
}

std::string ExperimentConfig::canonical_json() const { return to_json_value(*this, false).dump(); }
std::string ExperimentConfig::to_json() const { return to_json_value(*this, true).dump(2) + "\n"; }
std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical_json()); }

}  // namespace maxmult
