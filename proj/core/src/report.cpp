#include "maxmult/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

#ifndef MAXMULT_VERSION
#define MAXMULT_VERSION "0.0.0"
#endif

namespace maxmult {

namespace {

nlohmann::json number(double v) {
  // JSON has no inf/nan; keep them visible as strings.
  if (std::isfinite(v)) return v;
  return format_number(v);
}

nlohmann::json fit_json(const stats::LinearFit& f) {
  return {{"slope", number(f.slope)},         {"intercept", number(f.intercept)},
          {"r2", number(f.r2)},               {"slope_stderr", number(f.slope_stderr)},
          {"slope_ci95", number(f.slope_ci95)}, {"points", f.points},
          {"degenerate", f.degenerate}};
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", value);
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string version() { return MAXMULT_VERSION; }

ExperimentReport::ExperimentReport(std::string experiment, std::string config_hash, std::uint64_t seed)
    : experiment_(std::move(experiment)), config_hash_(std::move(config_hash)), seed_(seed) {}

void ExperimentReport::add(std::string series, std::string param_name, double param, double numerator,
                           double denominator) {
  Measurement m;
  m.series = std::move(series);
  m.param_name = std::move(param_name);
  m.param = param;
  m.numerator = numerator;
  m.denominator = denominator;
  m.ratio = (numerator == 0.0 && denominator == 0.0) ? 0.0 : numerator / denominator;
  rows_.push_back(std::move(m));
}

void ExperimentReport::set_fit(const std::string& series, const stats::LinearFit& fit) {
  fits_[series] = fit;
  for (auto& r : rows_)
    if (r.series == series) r.fit = fit;
}

void ExperimentReport::set_constant(const std::string& name, double value) { constants_[name] = value; }
void ExperimentReport::set_flag(const std::string& name, bool value) { flags_[name] = value; }
void ExperimentReport::set_text(const std::string& name, std::string value) { texts_[name] = std::move(value); }

void ExperimentReport::add_verdict(std::string name, bool pass, std::string detail) {
  verdicts_.push_back({std::move(name), pass, std::move(detail)});
}

void ExperimentReport::note(std::string text) { notes_.push_back(std::move(text)); }

std::optional<double> ExperimentReport::constant(const std::string& name) const {
  const auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

std::optional<stats::LinearFit> ExperimentReport::fit(const std::string& series) const {
  const auto it = fits_.find(series);
  if (it == fits_.end()) return std::nullopt;
  return it->second;
}

std::vector<Measurement> ExperimentReport::series(const std::string& name) const {
  std::vector<Measurement> out;
  for (const auto& r : rows_)
    if (r.series == name) out.push_back(r);
  return out;
}

bool ExperimentReport::passed() const {
  for (const auto& v : verdicts_)
    if (!v.pass) return false;
  return true;
}

std::optional<std::string> ExperimentReport::first_non_finite() const {
  for (const auto& r : rows_) {
    if (!std::isfinite(r.numerator) || !std::isfinite(r.denominator))
      return fmt::format("{} {}={} numerator={} denominator={}", r.series, r.param_name, format_number(r.param),
                         format_number(r.numerator), format_number(r.denominator));
  }
  for (const auto& [name, v] : constants_)
    if (!std::isfinite(v)) return fmt::format("constant {}={}", name, format_number(v));
  return std::nullopt;
}

std::string ExperimentReport::csv() const {
  std::string out = fmt::format("# config_hash={} seed={} version={}\n", config_hash_, seed_, version());
  out += "experiment,param_name,param,numerator,denominator,ratio,fit_slope,fit_intercept,fit_r2\n";
  for (const auto& r : rows_) {
    out += fmt::format("{},{},{},{},{},{},", r.series, r.param_name, format_number(r.param),
                       format_number(r.numerator), format_number(r.denominator), format_number(r.ratio));
    if (r.fit) {
      out += fmt::format("{},{},{}\n", format_number(r.fit->slope), format_number(r.fit->intercept),
                         format_number(r.fit->r2));
    } else {
      out += ",,\n";
    }
  }
  return out;
}

std::string ExperimentReport::json() const {
  nlohmann::json j;
  j["experiment"] = experiment_;
  j["version"] = version();
  j["config_hash"] = config_hash_;
  j["seed"] = seed_;
  j["rows"] = rows_.size();
  auto fits = nlohmann::json::object();
  for (const auto& [name, f] : fits_) fits[name] = fit_json(f);
  j["fits"] = std::move(fits);
  auto constants = nlohmann::json::object();
  for (const auto& [name, v] : constants_) constants[name] = number(v);
  j["constants"] = std::move(constants);
  auto flags = nlohmann::json::object();
  for (const auto& [name, v] : flags_) flags[name] = v;
  j["flags"] = std::move(flags);
  auto texts = nlohmann::json::object();
  for (const auto& [name, v] : texts_) texts[name] = v;
  j["info"] = std::move(texts);
  auto verdicts = nlohmann::json::array();
  for (const auto& v : verdicts_) verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = std::move(verdicts);
  j["notes"] = notes_;
  j["passed"] = passed();
  return j.dump(2) + "\n";
}

void ExperimentReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto put = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
  };
  put(dir / (experiment_ + ".csv"), csv());
  put(dir / (experiment_ + ".json"), json());
}

}  // namespace maxmult
