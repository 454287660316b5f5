#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "maxmult/multiplier.hpp"
#include "maxmult/symbols.hpp"
#include "maxmult/test_bank.hpp"

namespace maxmult::multiplier {
namespace {

Signal wave(const Grid& g, double index) {
  std::vector<Complex> v(g.total_samples());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::polar(1.0, 2.0 * std::numbers::pi * index * g.coordinate(i)[0] / g.extent);
  return Signal(g, v);
}

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = e(rng);
  return v;
}

double max_diff(const Signal& a, const Signal& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Centered averages over every half-width 0..n/4, periodic, O(n^2).
std::vector<double> all_radii_maximal(std::span<const double> v) {
  const long n = static_cast<long>(v.size());
  std::vector<double> out(v.size(), 0.0);
  for (long x = 0; x < n; ++x) {
    double sum = v[x];
    double best = v[x];
    for (long w = 1; w <= n / 4; ++w) {
      sum += v[(x + w) % n] + v[(x - w + n) % n];
      best = std::max(best, sum / static_cast<double>(2 * w + 1));
    }
    out[x] = best;
  }
  return out;
}

TEST(ApplySymbol, IdentityAndIndicator) {
  const Grid g = Grid::make(1, 9);
  const Signal f = random_band_signal(g, 1);
  EXPECT_LT(max_diff(apply_symbol(SpectralSymbol::constant(1.0), f), f), 1e-15);
  const Signal w = wave(g, 7);
  EXPECT_LT(max_diff(apply_symbol(SpectralSymbol::frequency_indicator({7.0, 0.0}), w), w), 1e-12);
  EXPECT_LT(lp_norm(apply_symbol(SpectralSymbol::frequency_indicator({8.0, 0.0}), w), 2.0), 1e-12);
}

TEST(ApplySymbol, PlancherelBound) {
  const Grid g = Grid::make(1, 12);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto m = symbols::random_mikhlin_member(i, 17, symbols::MikhlinKind::signs);
    const Signal f = random_band_signal(g, 100 + i);
    EXPECT_LE(lp_norm(apply_symbol(m, f), 2.0), lp_norm(f, 2.0) * (1 + 1e-12));
  }
}

TEST(ApplySymbol, RejectsMismatchedSamples) {
  const Grid g = Grid::make(1, 6);
  const std::vector<double> values(10, 1.0);
  EXPECT_THROW(apply_sampled(values, Signal(g)), std::invalid_argument);
}

TEST(BandOperator, SumOfPiecesIsBandRestrictedSymbol) {
  const Grid g = Grid::make(1, 12);
  const auto m = symbols::random_mikhlin_member(3, 5, symbols::MikhlinKind::phases);
  const Signal f = random_band_signal(g, 8);
  Signal sum(g);
  for (int k = 1; k <= g.max_usable_octave(); ++k) sum = sum + band_operator(BandKind::T, k, f, &m);
  const auto chi = band_symbol({1, g.max_usable_octave()});
  EXPECT_LT(max_diff(sum, apply_symbol(m.times(chi), f)), 1e-10);
}

TEST(BandOperator, ReconstructsOperatorOnBandLimitedSignals) {
  const Grid g = Grid::make(1, 11);
  const auto m = symbols::random_mikhlin_member(0, 9, symbols::MikhlinKind::signs);
  const Signal f = random_band_signal(g, 4);
  Signal sum(g);
  for (int k = 1; k <= g.max_usable_octave(); ++k) sum = sum + band_operator(BandKind::T, k, f, &m);
  EXPECT_LT(max_diff(sum, apply_symbol(m, f)), 1e-10);
}

TEST(BandOperator, NestingIdentities) {
  const Grid g = Grid::make(1, 10);
  const auto m = symbols::random_mikhlin_member(1, 2, symbols::MikhlinKind::phases);
  const Signal f = random_band_signal(g, 3);
  for (int k = 1; k <= g.max_usable_octave(); ++k) {
    const Signal t = band_operator(BandKind::T, k, f, &m);
    EXPECT_LT(max_diff(band_operator(BandKind::L, k, t), t), 1e-12) << k;
    const Signal chain =
        band_operator(BandKind::B, k, band_operator(BandKind::B, k, band_operator(BandKind::Ltilde, k, t)));
    EXPECT_LT(max_diff(chain, t), 1e-10) << k;
  }
}

TEST(BandOperator, LittlewoodPaleyPieceFixesWaveInItsOctave) {
  const Grid g = Grid::make(1, 10);
  const Signal w = wave(g, 32.0);
  EXPECT_LT(max_diff(band_operator(BandKind::L, 5, w), w), 1e-12);
}

TEST(BandOperator, SquaredBetaSymbol) {
  const Grid g = Grid::make(1, 10);
  const Signal f = random_band_signal(g, 6);
  const int k = 4;
  const auto beta = PartitionBank(g).sample(Profile::beta, k);
  std::vector<double> sq(beta.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = beta[i] * beta[i];
  EXPECT_LT(max_diff(band_operator(BandKind::B, k, band_operator(BandKind::B, k, f)), apply_sampled(sq, f)), 1e-13);
}

TEST(BandOperator, Errors) {
  const Grid g = Grid::make(1, 8);
  const Signal f(g);
  EXPECT_THROW(band_operator(BandKind::T, 3, f), std::invalid_argument);
  EXPECT_THROW(band_operator(BandKind::L, 0, f), std::out_of_range);
  EXPECT_THROW(band_operator(BandKind::L, 7, f), std::out_of_range);
}

TEST(Maximal, ConstantIsFixedAndDominatesModulus) {
  const Grid g = Grid::make(1, 8);
  const Signal c(g, std::vector<Complex>(g.total_samples(), 3.0));
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(hl_maximal(c)[i].real(), 3.0, 1e-13);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(grand_maximal(c, 1.5)[i].real(), 3.0, 1e-12);
  const Signal f = random_band_signal(g, 1);
  const Signal m = hl_maximal(f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_GE(m[i].real(), std::abs(f[i]));
  EXPECT_THROW(hl_maximal(f, 0.5), std::invalid_argument);
}

TEST(Maximal, SpikeAgainstAllRadiiOracle) {
  const Grid g = Grid::make(1, 8);
  std::vector<double> spike(g.total_samples(), 0.0);
  spike[0] = 1.0;
  const auto dyad = hl_maximal_values(g, spike, 1.0);
  const auto all = all_radii_maximal(spike);
  for (std::size_t j = 0; j + 2 < 8; ++j) {
    // At distance 2^j samples the best window has half-width 2^j.
    const std::size_t x = std::size_t{1} << j;
    EXPECT_NEAR(dyad[x], 1.0 / static_cast<double>(2 * x + 1), 1e-15);
  }
  for (std::size_t i = 0; i < spike.size(); ++i) {
    EXPECT_LE(dyad[i], all[i] * (1 + 1e-12));
    EXPECT_LE(all[i], 2.0 * dyad[i] * (1 + 1e-12));
  }
}

TEST(Maximal, RandomFieldAgainstAllRadiiOracle) {
  for (int J = 4; J <= 8; ++J) {
    const Grid g = Grid::make(1, J);
    const auto v = random_field(g.total_samples(), J);
    const auto dyad = dyadic_maximal(g, v);
    const auto all = all_radii_maximal(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_LE(dyad[i], all[i] * (1 + 1e-12));
      EXPECT_LE(all[i], 2.0 * dyad[i]);
    }
  }
}

TEST(Maximal, TwoDimensionalSquaresAgainstBruteForce) {
  const Grid g = Grid::make(2, 4);
  const long n = 16;
  const auto v = random_field(g.total_samples(), 77);
  const auto fast = dyadic_maximal(g, v);
  for (long y = 0; y < n; ++y)
    for (long x = 0; x < n; ++x) {
      double best = v[y * n + x];
      for (long w = 1; w <= n / 4; w *= 2) {
        double s = 0.0;
        for (long dy = -w; dy <= w; ++dy)
          for (long dx = -w; dx <= w; ++dx) s += v[((y + dy + n) % n) * n + (x + dx + n) % n];
        best = std::max(best, s / static_cast<double>((2 * w + 1) * (2 * w + 1)));
      }
      EXPECT_NEAR(fast[y * n + x], best, 1e-12);
    }
}

TEST(Maximal, SublinearAndPowerMean) {
  const Grid g = Grid::make(1, 10);
  const auto a = random_field(g.total_samples(), 1);
  const auto b = random_field(g.total_samples(), 2);
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a[i] + b[i];
  const auto ma = dyadic_maximal(g, a), mb = dyadic_maximal(g, b), ms = dyadic_maximal(g, s);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_LE(ms[i], (ma[i] + mb[i]) * (1 + 1e-14));
  const auto m1 = hl_maximal_values(g, a, 1.0);
  const auto m2 = hl_maximal_values(g, a, 1.7);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_GE(m2[i], m1[i] * (1 - 1e-14));
}

TEST(Maximal, GrandMaximalIsThreeNestedCalls) {
  const Grid g = Grid::make(1, 9);
  const Signal f = random_band_signal(g, 12);
  const Signal nested = hl_maximal(hl_maximal(hl_maximal(f)));
  EXPECT_LT(max_diff(grand_maximal(f, 1.0), nested), 1e-14);
  const double r = 1.4;
  std::vector<double> p(f.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(std::abs(f[i]), r);
  auto v = dyadic_maximal(g, dyadic_maximal(g, dyadic_maximal(g, p)));
  const auto gm = grand_maximal_values(g, f.magnitudes(), r);
  const auto m = hl_maximal_values(g, f.magnitudes(), 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(gm[i], std::pow(v[i], 1.0 / r), 1e-12);
    EXPECT_GE(gm[i], m[i] * (1 - 1e-14));
  }
}

TEST(Maximal, GrandMaximalDominatesOnSpike) {
  const Grid g = Grid::make(1, 8);
  std::vector<double> spike(g.total_samples(), 0.0);
  spike[40] = 2.0;
  const auto m = hl_maximal_values(g, spike, 1.0);
  const auto mmm = grand_maximal_values(g, spike, 1.0);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_GE(mmm[i], m[i]);
}

TEST(GFunction, ZeroAndHomogeneity) {
  const Grid g = Grid::make(1, 10);
  const auto zero = g_function_values(Signal(g), 1.5);
  for (double v : zero) EXPECT_EQ(v, 0.0);
  const Signal f = random_band_signal(g, 5);
  const auto a = g_function_values(f, 1.5);
  const auto b = g_function_values(Complex(0.0, -3.0) * f, 1.5);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 3.0 * a[i], 1e-12 * (1 + b[i]));
  EXPECT_THROW(g_function_values(f, 2.0), std::invalid_argument);
  EXPECT_THROW(g_function_values(f, 1.0), std::invalid_argument);
}

TEST(GFunction, PureWaveSeesThreeOctaves) {
  const Grid g = Grid::make(1, 10);
  const int k0 = 5;
  const Signal w = wave(g, std::ldexp(1.0, k0));
  // |L_k w| is the constant psi(2^{k0-k}); the maximal iterates keep constants.
  double expected = 0.0;
  int contributing = 0;
  for (int k = 1; k <= g.max_usable_octave(); ++k) {
    const double level = profile::psi(std::ldexp(1.0, k0 - k));
    if (level > 0.0) {
      ++contributing;
      EXPECT_LE(std::abs(k - k0), 1);
    }
    expected += level * level;
  }
  EXPECT_EQ(contributing, 3);
  for (double v : g_function_values(w, 1.5)) EXPECT_NEAR(v, std::sqrt(expected), 1e-10);
}

TEST(GFunction, L2ConstantStableAcrossResolutions) {
  std::vector<double> constants;
  for (int J : {8, 10, 12}) {
    const Grid g = Grid::make(1, J);
    double c = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Signal f = random_band_signal(g, derive_seed(40 + J, s));
      c = std::max(c, lp_norm(g, g_function_values(f, 1.5), 2.0) / lp_norm(f, 2.0));
    }
    constants.push_back(c);
  }
  const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(BandOperator, LocalizedPieceDominatedByMaximalFunction) {
  std::vector<double> constants;
  for (int J : {8, 10, 12}) {
    const Grid g = Grid::make(1, J);
    double c = 0.0;
    for (int s = 0; s < 4; ++s) {
      const Signal f = random_band_signal(g, derive_seed(60 + J, s));
      const auto mf = hl_maximal_values(g, f.magnitudes(), 1.0);
      for (int k = 1; k <= g.max_usable_octave(); ++k) {
        const Signal bl = band_operator(BandKind::B, k, band_operator(BandKind::Ltilde, k, f));
        for (std::size_t i = 0; i < mf.size(); ++i) c = std::max(c, std::abs(bl[i]) / mf[i]);
      }
    }
    constants.push_back(c);
  }
  const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
  EXPECT_TRUE(std::isfinite(*hi));
  EXPECT_LE(*hi / *lo, 2.0);
}

}  // namespace
}  // namespace maxmult::multiplier
