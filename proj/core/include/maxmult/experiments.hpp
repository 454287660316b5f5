#pragma once

#include <string>
#include <vector>

#include "maxmult/config.hpp"
#include "maxmult/grid.hpp"
#include "maxmult/report.hpp"
#include "maxmult/symbol.hpp"
#include "maxmult/symbols.hpp"

/// Orchestrated measurements. Each returns a report whose rows carry raw
/// numerators and denominators and whose verdicts encode the acceptance gates.
namespace maxmult::experiments {

/// Gate tolerances, pinned here so the CLI and the acceptance suite agree.
namespace gates {
inline constexpr double kParseval = 1e-12;
inline constexpr double kPartition = 1e-10;
inline constexpr double kMartingale = 1e-10;
inline constexpr double kGrowthSpread = 3.0;
inline constexpr double kPointwiseStability = 2.0;
inline constexpr double kSlopeDB = -0.8;
inline constexpr double kSlopeEB = -0.3;
inline constexpr double kSlopeE0Slack = 0.15;
inline constexpr double kFitR2 = 0.9;
inline constexpr double kReconstruction = 1e-10;
inline constexpr double kGoodLambdaR2 = 0.8;
inline constexpr double kRademacherGrowthSpread = 2.5;
inline constexpr double kDilatedSpread = 2.0;
inline constexpr double kTkStability = 2.0;
}  // namespace gates

/// Exact identities: Parseval, partition of unity, cutoff nesting, martingale algebra.
ExperimentReport selftest(const ExperimentConfig& cfg);

/// R(N) = max_f ||sup_{i<N} |T_i f|||_p / ||f||_p over the test bank.
ExperimentReport growth_experiment(const ExperimentConfig& cfg);

/// sup_i |T_i f| for each prefix count, as fields (prefix-stable running maxima).
std::vector<std::vector<double>> running_sup_fields(const std::vector<SpectralSymbol>& symbols, const Signal& f,
                                                    const std::vector<std::size_t>& counts);

struct PointwiseRatio {
  double max_ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

/// max_x S(Tf)(x) / (y_norm * G_r(f)(x)) over points where the denominator exceeds 1e-12 * its peak.
PointwiseRatio pointwise_ratio(const SpectralSymbol& m, const Signal& f, double y_norm_value,
                               const std::vector<double>& g_r_field);
/// Single-instance form; computes G_r(f) and ||m||_{Y(r', d/r)} itself.
ExperimentReport pointwise_lemma_check(const SpectralSymbol& m, const Signal& f, double r, const Grid& analysis);
/// Signs symbols x test bank at every J in cfg.pointwise.J_values.
ExperimentReport pointwise_experiment(const ExperimentConfig& cfg);

struct SplittingInputs {
  double a_r = 1.0;
  double b = 1.0;
  double c_d = 1.0;
  /// Generation standing in for the unit-cube average.
  int base_generation = 0;
  double p = 2.0;
  double r = 1.5;
  int lambda_points = 40;
};

/// Measures of E_{lambda,1..3} and of {sup_i |T_i f| > 4 lambda} on a lambda grid.
ExperimentReport splitting_quantities(const ExperimentConfig& cfg, const std::vector<SpectralSymbol>& m_list,
                                      const Signal& f, const SplittingInputs& in);

/// Decay fits; kind is one of D_B_minus_s, E_B_plus_s, T_k_bound, E0_decay.
ExperimentReport sublemma_decay_fit(const std::string& kind, const ExperimentConfig& cfg);

/// sup over dilations t with m(2^t .) meeting the usable band of |T_{m(2^t .)} f|.
std::vector<double> dyadic_dilation_maximal(const SpectralSymbol& m, const Signal& f);
/// Octave series with prescribed profile values c_k = (log(2 + sigma(k)))^{-1/2}, sigma a seeded permutation.
SpectralSymbol log_profile_symbol(int octaves, std::uint64_t seed);
ExperimentReport dyadic_dilation_experiment(const ExperimentConfig& cfg);

ExperimentReport good_lambda_fit(const ExperimentConfig& cfg);

ExperimentReport rademacher_tail_experiment(const ExperimentConfig& cfg);
ExperimentReport rademacher_growth_experiment(const ExperimentConfig& cfg);
ExperimentReport rademacher_dilated_experiment(const ExperimentConfig& cfg);

/// Analysis grid built from the config.
Grid analysis_grid(const ExperimentConfig& cfg);

}  // namespace maxmult::experiments
