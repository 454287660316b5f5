#include "maxmult/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace maxmult::dyadic {

namespace {

void check_generation(const Grid& grid, int k, int max_k) {
  if (k < 0 || k > max_k)
    throw std::out_of_range("dyadic generation " + std::to_string(k) + " outside [0, " + std::to_string(max_k) +
                            "]");
  (void)grid;
}

}  // namespace

DyadicGeneration::DyadicGeneration(const Grid& grid, int k) : grid_(grid), k_(k) {
  check_generation(grid, k, grid.log2_size);
}

double DyadicGeneration::side() const { return grid_.extent / static_cast<double>(cubes_per_axis()); }

std::size_t DyadicGeneration::cube_count() const {
  return grid_.dim == 1 ? cubes_per_axis() : cubes_per_axis() * cubes_per_axis();
}

std::size_t DyadicGeneration::samples_per_cube() const { return grid_.total_samples() / cube_count(); }

std::size_t DyadicGeneration::cube_of(std::size_t sample) const {
  const int shift = grid_.log2_size - k_;
  if (grid_.dim == 1) return sample >> shift;
  const std::size_t n = grid_.samples_per_axis();
  const std::size_t row = (sample / n) >> shift;
  const std::size_t col = (sample % n) >> shift;
  return row * cubes_per_axis() + col;
}

std::vector<std::size_t> DyadicGeneration::children(std::size_t cube) const {
  if (k_ >= grid_.log2_size) throw std::out_of_range("finest generation has no children");
  if (cube >= cube_count()) throw std::out_of_range("cube index out of range");
  if (grid_.dim == 1) return {2 * cube, 2 * cube + 1};
  const std::size_t m = cubes_per_axis();
  const std::size_t row = cube / m;
  const std::size_t col = cube % m;
  const std::size_t child_m = 2 * m;
  return {(2 * row) * child_m + 2 * col, (2 * row) * child_m + 2 * col + 1, (2 * row + 1) * child_m + 2 * col,
          (2 * row + 1) * child_m + 2 * col + 1};
}

DyadicLadder::DyadicLadder(const Signal& f) : grid_(f.grid()) {
  const int levels = grid_.log2_size;
  means_.resize(static_cast<std::size_t>(levels) + 1);
  means_[levels].assign(f.samples().begin(), f.samples().end());
  for (int k = levels - 1; k >= 0; --k) {
    const auto& fine = means_[k + 1];
    auto& coarse = means_[k];
    const std::size_t m = std::size_t{1} << k;
    if (grid_.dim == 1) {
      coarse.resize(m);
      for (std::size_t i = 0; i < m; ++i) coarse[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
    } else {
      coarse.resize(m * m);
      const std::size_t fm = 2 * m;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
          coarse[r * m + c] = 0.25 * (fine[(2 * r) * fm + 2 * c] + fine[(2 * r) * fm + 2 * c + 1] +
                                      fine[(2 * r + 1) * fm + 2 * c] + fine[(2 * r + 1) * fm + 2 * c + 1]);
    }
  }
}

const std::vector<Complex>& DyadicLadder::cube_means(int k) const {
  check_generation(grid_, k, generations());
  return means_[static_cast<std::size_t>(k)];
}

Complex DyadicLadder::value(int k, std::size_t sample) const {
  return cube_means(k)[DyadicGeneration(grid_, k).cube_of(sample)];
}

namespace {

std::vector<Complex> expand(const DyadicLadder& ladder, int k) {
  const Grid& grid = ladder.grid();
  const DyadicGeneration gen(grid, k);
  const auto& means = ladder.cube_means(k);
  std::vector<Complex> out(grid.total_samples());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = means[gen.cube_of(i)];
  return out;
}

// Visits (sample, E_k value) for every generation, coarsest first.
template <typename Fn>
void for_each_generation(const DyadicLadder& ladder, Fn&& fn) {
  const Grid& grid = ladder.grid();
  for (int k = 0; k <= ladder.generations(); ++k) {
    const DyadicGeneration gen(grid, k);
    const auto& means = ladder.cube_means(k);
    for (std::size_t i = 0; i < grid.total_samples(); ++i) fn(k, i, means[gen.cube_of(i)]);
  }
}

}  // namespace

Signal cond_expect(const Signal& f, int k) {
  check_generation(f.grid(), k, f.grid().log2_size);
  return Signal(f.grid(), expand(DyadicLadder(f), k));
}

Signal mart_diff(const Signal& f, int k) {
  check_generation(f.grid(), k, f.grid().log2_size - 1);
  const DyadicLadder ladder(f);
  auto fine = expand(ladder, k + 1);
  const auto coarse = expand(ladder, k);
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] -= coarse[i];
  return Signal(f.grid(), std::move(fine));
}

std::vector<double> square_function_values(const DyadicLadder& ladder) {
  const Grid& grid = ladder.grid();
  std::vector<double> sum(grid.total_samples(), 0.0);
  std::vector<Complex> previous(grid.total_samples());
  for_each_generation(ladder, [&](int k, std::size_t i, const Complex& v) {
    if (k > 0) sum[i] += std::norm(v - previous[i]);
    previous[i] = v;
  });
  for (double& s : sum) s = std::sqrt(s);
  return sum;
}

std::vector<double> mart_maximal_values(const DyadicLadder& ladder) {
  std::vector<double> out(ladder.grid().total_samples(), 0.0);
  for_each_generation(ladder, [&](int, std::size_t i, const Complex& v) { out[i] = std::max(out[i], std::abs(v)); });
  return out;
}

std::vector<double> centered_maximal_values(const DyadicLadder& ladder) {
  const Complex mean = ladder.cube_means(0)[0];
  std::vector<double> out(ladder.grid().total_samples(), 0.0);
  for_each_generation(ladder,
                      [&](int, std::size_t i, const Complex& v) { out[i] = std::max(out[i], std::abs(v - mean)); });
  return out;
}

Signal square_function(const Signal& f) {
  const auto values = square_function_values(DyadicLadder(f));
  return Signal(f.grid(), values);
}

Signal mart_maximal(const Signal& f) {
  const auto values = mart_maximal_values(DyadicLadder(f));
  return Signal(f.grid(), values);
}

GoodLambdaFields good_lambda_fields(const Signal& g) {
  const DyadicLadder ladder(g);
  return {centered_maximal_values(ladder), mart_maximal_values(ladder), square_function_values(ladder)};
}

GoodLambdaMeasurement good_lambda_measure(const GoodLambdaFields& fields, double eps, double lambda) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("good-lambda eps must lie in (0, 1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("good-lambda lambda must be positive");
  const std::size_t n = fields.square.size();
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fields.centered_maximal[i] > 2.0 * lambda && fields.square[i] < eps * lambda) ++lhs;
    if (fields.maximal[i] > eps * lambda) ++rhs;
  }
  const double total = static_cast<double>(n);
  return {eps, lambda, static_cast<double>(lhs) / total, static_cast<double>(rhs) / total};
}

GoodLambdaMeasurement good_lambda_measure(const Signal& g, double eps, double lambda) {
  return good_lambda_measure(good_lambda_fields(g), eps, lambda);
}

}  // namespace maxmult::dyadic
