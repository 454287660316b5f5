#include "maxmult/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_fit.h>
#include <gsl/gsl_statistics_double.h>

namespace maxmult::stats {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: x and y differ in length");
  LinearFit fit;
  fit.points = x.size();
  const bool finite = std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); }) &&
                      std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
  const bool spread = x.size() >= 2 && std::any_of(x.begin(), x.end(), [&](double v) { return v != x.front(); });
  if (!finite || !spread) {
    fit.degenerate = true;
    fit.slope = fit.intercept = fit.r2 = std::nan("");
    return fit;
  }
  double c0 = 0, c1 = 0, cov00 = 0, cov01 = 0, cov11 = 0, sumsq = 0;
  gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  fit.intercept = c0;
  fit.slope = c1;
  const double tss = gsl_stats_tss(y.data(), 1, y.size());
  fit.r2 = tss > 0.0 ? 1.0 - sumsq / tss : 1.0;
  fit.slope_stderr = std::sqrt(cov11);
  if (x.size() > 2) fit.slope_ci95 = gsl_cdf_tdist_Pinv(0.975, static_cast<double>(x.size() - 2)) * fit.slope_stderr;
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty set");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace maxmult::stats
