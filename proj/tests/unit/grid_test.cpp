#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "maxmult/grid.hpp"

namespace maxmult {
namespace {

std::vector<Complex> random_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

// Textbook O(n^2) DFT with the library's normalization.
std::vector<Complex> direct_dft(const std::vector<Complex>& f) {
  const std::size_t n = f.size();
  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(m * x % n) / static_cast<double>(n);
      acc += f[x] * std::polar(1.0, angle);
    }
    out[m] = acc / static_cast<double>(n);
  }
  return out;
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Grid, FrequencyIndicesSpanSymmetricRange) {
  const Grid g = Grid::make(1, 4);
  EXPECT_EQ(g.frequency_index(0), 0);
  EXPECT_EQ(g.frequency_index(7), 7);
  EXPECT_EQ(g.frequency_index(8), -8);
  EXPECT_EQ(g.frequency_index(15), -1);
  EXPECT_EQ(g.max_usable_octave(), 2);
  EXPECT_FALSE(g.is_usable_octave(0));
  EXPECT_TRUE(g.is_usable_octave(2));
  EXPECT_FALSE(g.is_usable_octave(3));
}

TEST(Grid, MakeRejectsBadShapes) {
  EXPECT_THROW(Grid::make(3, 6), std::invalid_argument);
  EXPECT_THROW(Grid::make(1, 0), std::invalid_argument);
  EXPECT_THROW(Grid::make(1, 6, -1.0), std::invalid_argument);
}

TEST(Grid, FromSamplesRejectsEmptyAndNonPowerOfTwo) {
  EXPECT_THROW(Signal::from_samples({}), std::invalid_argument);
  EXPECT_THROW(Signal::from_samples(std::vector<Complex>(12)), std::invalid_argument);
  EXPECT_THROW(Signal::from_samples(std::vector<Complex>(8), 2), std::invalid_argument);
  EXPECT_EQ(Signal::from_samples(std::vector<Complex>(16), 2).grid().log2_size, 2);
}

TEST(Transform, ConstantConcentratesAtZero) {
  const Grid g = Grid::make(1, 6);
  const Signal f(g, std::vector<Complex>(g.total_samples(), Complex(2.5, -1.0)));
  const Spectrum F = transform(f);
  EXPECT_NEAR(std::abs(F[0] - Complex(2.5, -1.0)), 0.0, 1e-14);
  for (std::size_t i = 1; i < F.size(); ++i) EXPECT_LT(std::abs(F[i]), 1e-14);
}

TEST(Transform, PureWaveHasSingleCoefficient) {
  const Grid g = Grid::make(1, 7, 2.0);
  std::vector<Complex> v(g.total_samples());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::polar(1.0, 2.0 * std::numbers::pi * 7.0 * g.coordinate(i)[0] / g.extent);
  const Spectrum F = transform(Signal(g, v));
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (i == 7) EXPECT_NEAR(std::abs(F[i] - Complex(1.0)), 0.0, 1e-13);
    else EXPECT_LT(std::abs(F[i]), 1e-13) << "index " << i;
  }
  EXPECT_DOUBLE_EQ(g.frequency(7)[0], 3.5);
}

TEST(Transform, MatchesDirectDftOracle) {
  for (int J = 1; J <= 6; ++J) {
    const Grid g = Grid::make(1, J);
    const auto v = random_samples(g.total_samples(), 100 + J);
    const Spectrum F = transform(Signal(g, v));
    const auto ref = direct_dft(v);
    EXPECT_LT(max_abs_diff(F.coefficients(), ref), 1e-13) << "J=" << J;
  }
}

TEST(Transform, TwoDimensionalMatchesRowColumnOracle) {
  const Grid g = Grid::make(2, 3);
  const std::size_t n = g.samples_per_axis();
  const auto v = random_samples(g.total_samples(), 7);
  // Rows then columns with the 1-d oracle.
  std::vector<Complex> tmp(v.size());
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = direct_dft(std::vector<Complex>(v.begin() + r * n, v.begin() + (r + 1) * n));
    std::copy(row.begin(), row.end(), tmp.begin() + r * n);
  }
  std::vector<Complex> ref(v.size());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Complex> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = tmp[r * n + c];
    const auto out = direct_dft(col);
    for (std::size_t r = 0; r < n; ++r) ref[r * n + c] = out[r];
  }
  EXPECT_LT(max_abs_diff(transform(Signal(g, v)).coefficients(), ref), 1e-13);
}

TEST(Transform, RoundTripAtJ8) {
  const Grid g = Grid::make(1, 8);
  const auto v = random_samples(g.total_samples(), 3);
  const Signal back = inverse_transform(transform(Signal(g, v)));
  EXPECT_LT(max_abs_diff(back.samples(), v), 1e-12);
  const Spectrum F(g, random_samples(g.total_samples(), 4));
  EXPECT_LT(max_abs_diff(transform(inverse_transform(F)).coefficients(), F.coefficients()), 1e-12);
}

TEST(Transform, ParsevalUpToJ14) {
  for (int J : {4, 8, 12, 14}) {
    const Grid g = Grid::make(1, J);
    const Signal f(g, random_samples(g.total_samples(), J));
    const double a = lp_norm(f, 2.0);
    const double b = spectrum_l2_norm(transform(f));
    EXPECT_LT(std::abs(a - b) / a, 1e-12) << "J=" << J;
  }
  const Grid g2 = Grid::make(2, 7);
  const Signal f2(g2, random_samples(g2.total_samples(), 99));
  EXPECT_LT(std::abs(lp_norm(f2, 2.0) - spectrum_l2_norm(transform(f2))) / lp_norm(f2, 2.0), 1e-12);
}

TEST(Transform, Linear) {
  const Grid g = Grid::make(1, 9);
  const Signal f(g, random_samples(g.total_samples(), 1));
  const Signal h(g, random_samples(g.total_samples(), 2));
  const Complex c(0.3, -2.0);
  const Spectrum lhs = transform(c * f + h);
  const Spectrum F = transform(f), H = transform(h);
  double d = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) d = std::max(d, std::abs(lhs[i] - (c * F[i] + H[i])));
  EXPECT_LT(d, 1e-13);
}

TEST(LpNorm, ConstantAndHalfIndicator) {
  const Grid g = Grid::make(1, 8);
  const Signal two(g, std::vector<Complex>(g.total_samples(), 2.0));
  for (double p : {1.0, 1.5, 2.0, 7.0, kInfinity}) EXPECT_NEAR(lp_norm(two, p), 2.0, 1e-13);
  std::vector<double> half(g.total_samples(), 0.0);
  std::fill(half.begin(), half.begin() + half.size() / 2, 1.0);
  EXPECT_NEAR(lp_norm(g, half, 2.0), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(LpNorm, RejectsSubunitExponent) {
  const Grid g = Grid::make(1, 4);
  EXPECT_THROW(lp_norm(Signal(g), 0.5), std::invalid_argument);
}

TEST(LpNorm, MonotoneAndDominatedByMax) {
  const Grid g = Grid::make(1, 10);
  const auto v = random_samples(g.total_samples(), 5);
  const Signal f(g, v);
  std::vector<Complex> bigger(v);
  for (auto& z : bigger) z *= 1.0 + 0.5 * std::abs(z);
  const Signal F(g, bigger);
  for (double p : {1.0, 2.0, 3.5}) {
    EXPECT_LE(lp_norm(f, p), lp_norm(f, kInfinity) * (1 + 1e-15));
    EXPECT_LE(lp_norm(f, p), lp_norm(F, p));
  }
}

}  // namespace
}  // namespace maxmult
