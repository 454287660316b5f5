#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maxmult {

/// Raised for unreadable or out-of-range configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BankSpec {
  int random = 8;
  int packets = 4;
  int indicators = 2;
  int total() const { return random + packets + indicators; }
};

struct PointwiseSettings {
  std::vector<int> J_values{10, 14};
  int symbol_count = 20;
  /// Points of the lambda grid used by the splitting measurement.
  int lambda_points = 40;
};

struct SublemmaSettings {
  std::string kind = "D_B_minus_s";
  int J = 14;
  /// Random band signals the maxima are taken over.
  int signals = 8;
};

struct GoodLambdaSettings {
  int trials = 100;
  int J = 12;
  std::vector<double> eps{0.5, 0.35, 0.25};
  /// Levels lambda = t * ||g||_2.
  std::vector<double> lambda_factors{0.25, 0.5, 1.0};
  /// Wider eps range used for the auxiliary c_d fit.
  std::vector<double> aux_eps{0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6};
};

struct DilationSettings {
  int octaves = 16;
  std::vector<int> widths{16, 32, 64};
  double q = 2.0;
  double alpha = 0.6;
};

struct RademacherSettings {
  int tail_n = 14;
  int tail_trials = 10;
  int tail_lambdas = 50;
  int row_length = 128;
  std::size_t patterns = 4096;
  std::vector<std::size_t> n_sweep{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  long window = 64;
  std::vector<int> lengths{64, 128, 256, 512, 1024, 2048, 4096};
};

struct ExperimentConfig {
  static constexpr int kSchemaVersion = 1;

  std::uint64_t seed = 1;
  int J = 12;
  int dim = 1;
  double r = 1.5;
  double p = 2.0;
  double q = 2.0;
  std::vector<std::size_t> n_sweep{2, 4, 8, 16, 32, 64, 128, 256};
  /// Mikhlin family kind: "signs" or "phases".
  std::string kind = "signs";
  int analysis_log2_extent = 10;
  /// Generation playing the role of the unit-cube average.
  int base_generation = 3;
  /// Constant of the good-lambda inequality; fitted when absent.
  std::optional<double> c_d;
  BankSpec bank;
  PointwiseSettings pointwise;
  SublemmaSettings sublemma;
  GoodLambdaSettings good_lambda;
  DilationSettings dilation;
  RademacherSettings rademacher;
  std::string output_dir = "out";

  /// Parses schema_version 1; unknown keys are rejected. Missing keys keep defaults.
  static ExperimentConfig from_json(std::string_view text);
  static ExperimentConfig from_file(const std::string& path);

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  /// Canonical serialization (sorted keys, no output path).
  std::string canonical_json() const;
  /// Full serialization including the output directory.
  std::string to_json() const;
  /// FNV-1a digest of canonical_json().
  std::string hash() const;
};

}  // namespace maxmult
