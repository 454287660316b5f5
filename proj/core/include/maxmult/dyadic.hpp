#pragma once

#include <cstddef>
#include <vector>

#include "maxmult/grid.hpp"

/// Dyadic martingale machinery on the periodic grid [0, extent)^dim.
///
/// Generation k consists of the cubes of side 2^{-k} extent. Generations run
/// over 0 <= k <= J, where J is the grid's log2_size; at k = J every cube is
/// a single sample, so E_J is the identity and sup/sums over k are finite.
/// Measures are counting fractions of grid points.
namespace maxmult::dyadic {

/// One generation of the dyadic filtration over a sample grid.
class DyadicGeneration {
 public:
  DyadicGeneration(const Grid& grid, int k);

  int generation() const { return k_; }
  double side() const;
  std::size_t cubes_per_axis() const { return std::size_t{1} << k_; }
  std::size_t cube_count() const;
  std::size_t samples_per_cube() const;
  /// Flat index of the cube containing a sample.
  std::size_t cube_of(std::size_t sample) const;
  /// The 2^dim children of a cube at generation k + 1.
  std::vector<std::size_t> children(std::size_t cube) const;

 private:
  Grid grid_;
  int k_;
};

/// All conditional expectations E_0 f, ..., E_J f of one signal, computed by
/// successive pairwise averaging in O(n) total.
class DyadicLadder {
 public:
  explicit DyadicLadder(const Signal& f);

  const Grid& grid() const { return grid_; }
  int generations() const { return grid_.log2_size; }
  /// Cube averages at generation k, indexed by DyadicGeneration::cube_of.
  const std::vector<Complex>& cube_means(int k) const;
  Complex value(int k, std::size_t sample) const;

 private:
  Grid grid_;
  std::vector<std::vector<Complex>> means_;
};

Signal cond_expect(const Signal& f, int k);
Signal mart_diff(const Signal& f, int k);
/// (sum_{k=0}^{J-1} |D_k f|^2)^{1/2}.
Signal square_function(const Signal& f);
/// max_{0<=k<=J} |E_k f|.
Signal mart_maximal(const Signal& f);

/// Pointwise fields used by the good-lambda measurements.
std::vector<double> square_function_values(const DyadicLadder& ladder);
std::vector<double> mart_maximal_values(const DyadicLadder& ladder);
/// sup_k |E_k g - E_0 g|.
std::vector<double> centered_maximal_values(const DyadicLadder& ladder);

struct GoodLambdaMeasurement {
  double eps = 0.0;
  double lambda = 0.0;
  /// meas{ sup_k |E_k g - E_0 g| > 2 lambda, S(g) < eps lambda }
  double lhs_measure = 0.0;
  /// meas{ sup_k |E_k g| > eps lambda }
  double rhs_measure = 0.0;
};

GoodLambdaMeasurement good_lambda_measure(const Signal& g, double eps, double lambda);

/// Batch form over precomputed fields; avoids recomputing the ladder per (eps, lambda).
struct GoodLambdaFields {
  std::vector<double> centered_maximal;
  std::vector<double> maximal;
  std::vector<double> square;
};
GoodLambdaFields good_lambda_fields(const Signal& g);
GoodLambdaMeasurement good_lambda_measure(const GoodLambdaFields& fields, double eps, double lambda);

}  // namespace maxmult::dyadic
