#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxmult/stats.hpp"

namespace maxmult {

/// One CSV row: a raw numerator/denominator pair and its ratio at a sweep parameter.
struct Measurement {
  std::string series;
  std::string param_name;
  double param = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  std::optional<stats::LinearFit> fit;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

class ExperimentReport {
 public:
  ExperimentReport(std::string experiment, std::string config_hash, std::uint64_t seed);

  const std::string& experiment() const { return experiment_; }
  const std::string& config_hash() const { return config_hash_; }
  std::uint64_t seed() const { return seed_; }

  /// Adds a row; ratio = numerator / denominator (0 when both vanish).
  void add(std::string series, std::string param_name, double param, double numerator, double denominator);
  /// Attaches a fit to every row of a series and records it in the summary.
  void set_fit(const std::string& series, const stats::LinearFit& fit);
  void set_constant(const std::string& name, double value);
  void set_flag(const std::string& name, bool value);
  void set_text(const std::string& name, std::string value);
  void add_verdict(std::string name, bool pass, std::string detail = {});
  void note(std::string text);

  const std::vector<Measurement>& rows() const { return rows_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  std::optional<double> constant(const std::string& name) const;
  std::optional<stats::LinearFit> fit(const std::string& series) const;
  /// Rows of one series, in insertion order.
  std::vector<Measurement> series(const std::string& name) const;

  bool passed() const;
  /// Description of the first non-finite number, if any.
  std::optional<std::string> first_non_finite() const;

  /// Provenance comment line followed by the header and one row per measurement.
  std::string csv() const;
  std::string json() const;
  /// Writes <dir>/<experiment>.csv and <dir>/<experiment>.json.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string experiment_;
  std::string config_hash_;
  std::uint64_t seed_;
  std::vector<Measurement> rows_;
  std::map<std::string, stats::LinearFit> fits_;
  std::map<std::string, double> constants_;
  std::map<std::string, bool> flags_;
  std::map<std::string, std::string> texts_;
  std::vector<Verdict> verdicts_;
  std::vector<std::string> notes_;
};

/// 17-significant-digit decimal rendering used in every CSV cell.
std::string format_number(double value);
/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);
/// Library version string.
std::string version();

}  // namespace maxmult
