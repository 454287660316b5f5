#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maxmult::stats {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
  /// Half-width of the 95% confidence interval for the slope (Student t).
  double slope_ci95 = 0.0;
  std::size_t points = 0;
  /// Fewer than two distinct x values, or non-finite inputs.
  bool degenerate = false;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);
double mean(std::span<const double> values);

}  // namespace maxmult::stats
