#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "maxmult/experiments.hpp"
#include "maxmult/partition.hpp"
#include "maxmult/symbols.hpp"

namespace maxmult::symbols {
namespace {

OctaveProfile make_profile(int first, std::vector<double> omega) {
  OctaveProfile p;
  p.octaves = {first, first + static_cast<int>(omega.size()) - 1};
  p.omega = omega;
  p.omega_star = nonincreasing_rearrangement(omega);
  return p;
}

// Series whose profile range (widened by one) is `range`.
SpectralSymbol series_for(OctaveRange range) {
  return SpectralSymbol::octave_series(range.first + 1, std::vector<Complex>(static_cast<std::size_t>(range.size() - 2), 1.0));
}

TEST(DilationSplit, ConstantProfileGivesOnePiece) {
  const auto p = make_profile(0, std::vector<double>(20, 0.7));
  const auto split = dilation_split(series_for(p.octaves), p);
  ASSERT_EQ(split.pieces.size(), 1u);
  EXPECT_EQ(split.pieces[0].octaves.size(), 20u);
  EXPECT_TRUE(split.pieces[0].clamped);
}

TEST(DilationSplit, SingleNonzeroGivesTopPiece) {
  std::vector<double> w(12, 0.0);
  w[5] = 2.0;
  const auto p = make_profile(-1, w);
  const auto split = dilation_split(series_for(p.octaves), p);
  ASSERT_EQ(split.pieces.size(), 1u);
  EXPECT_EQ(split.pieces[0].j, 0);
  EXPECT_EQ(split.pieces[0].octaves, (std::vector<int>{4}));
  EXPECT_EQ(split.shift_basis.size(), 12u);
  EXPECT_EQ(split.window, 0);
}

TEST(DilationSplit, ThresholdBandsPartitionSupport) {
  std::vector<double> w;
  for (int l = 0; l < 40; ++l) w.push_back(1.0 / std::sqrt(std::log(2.0 + (l * 17) % 40)));
  const auto p = make_profile(0, w);
  const auto split = dilation_split(series_for(p.octaves), p);
  std::multiset<int> all;
  for (const auto& piece : split.pieces) {
    const double hi = piece.j == 0 ? kInfinity : p.star(piece.upper_index);
    const double lo = piece.lower_index >= w.size() ? 0.0 : p.star(piece.lower_index);
    for (int k : piece.octaves) {
      EXPECT_GT(p.at(k), lo);
      EXPECT_LE(p.at(k), hi);
      all.insert(k);
    }
    EXPECT_DOUBLE_EQ(piece.envelope, std::pow(2.0, piece.j / 2.0) * p.star(piece.upper_index));
    EXPECT_EQ(piece.clamped, piece.lower_index >= w.size());
  }
  // Each supported octave lands in exactly one band.
  EXPECT_EQ(all.size(), w.size());
  EXPECT_EQ(std::set<int>(all.begin(), all.end()).size(), w.size());
  EXPECT_TRUE(split.pieces.back().clamped);
  // First bands: top two octaves, then ranks 2..3, then 4..15.
  EXPECT_EQ(split.pieces[0].octaves.size(), 2u);
  EXPECT_EQ(split.pieces[1].octaves.size(), 2u);
  EXPECT_EQ(split.pieces[2].octaves.size(), 12u);
}

TEST(DilationSplit, ShiftBasisCheckedByBruteForce) {
  std::vector<double> w;
  for (int l = 0; l < 30; ++l) w.push_back(std::exp(-0.1 * ((l * 7) % 30)));
  const auto p = make_profile(-2, w);
  const auto split = dilation_split(series_for(p.octaves), p);
  EXPECT_TRUE(split.disjoint);
  EXPECT_TRUE(split.covers);
  for (const auto& piece : split.pieces) {
    std::set<long> hit;
    std::size_t count = 0;
    for (long b : split.shift_basis)
      for (int k : piece.octaves) {
        hit.insert(b + k);
        ++count;
      }
    EXPECT_EQ(hit.size(), count) << "piece " << piece.j;
  }
  for (long t = p.octaves.first; t <= p.octaves.last; ++t) {
    long nearest = 1L << 40;
    for (long b : split.shift_basis) nearest = std::min(nearest, std::labs(t - b));
    EXPECT_LE(nearest, split.window);
  }
  EXPECT_TRUE(std::is_sorted(split.shift_basis.begin(), split.shift_basis.end()));
  EXPECT_EQ(split.shift_basis.front(), p.octaves.first);
}

TEST(DilationSplit, CheckersRejectBadInputs) {
  const std::vector<long> basis{0, 1};
  EXPECT_FALSE(shifts_disjoint(basis, {{0, 1}}));
  EXPECT_TRUE(shifts_disjoint(basis, {{0, 2}}));
  EXPECT_FALSE(shifts_cover(basis, 1, {0, 3}));
  EXPECT_TRUE(shifts_cover(basis, 2, {0, 3}));
}

TEST(DilationSplit, RejectsMismatchedProfile) {
  const auto p = make_profile(0, std::vector<double>(10, 1.0));
  EXPECT_THROW(dilation_split(SpectralSymbol::octave_series(0, std::vector<Complex>(10, 1.0)), p), std::invalid_argument);
  auto broken = p;
  broken.omega_star.pop_back();
  EXPECT_THROW(dilation_split(series_for(p.octaves), broken), std::invalid_argument);
}

TEST(DilationSplit, PiecesReconstructSymbolOnSelectedAnnuli) {
  const auto m = experiments::log_profile_symbol(16, 5);
  const Grid a = make_analysis_grid(1, 8);
  const auto p = octave_profile(m, 2.0, 0.6, a);
  const auto split = dilation_split(m, p);
  ASSERT_GE(split.pieces.size(), 2u);
  std::set<int> selected;
  for (const auto& piece : split.pieces) selected.insert(piece.octaves.begin(), piece.octaves.end());
  double err = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = std::exp2(-2.0 + 20.0 * i / 20000.0);
    const int k = static_cast<int>(std::floor(std::log2(r)));
    // Both phi-annuli through r must be selected for the identity to hold there.
    if (!selected.count(k) || !selected.count(k + 1)) continue;
    Complex s = 0.0;
    for (const auto& piece : split.pieces) s += piece.symbol({r, 0.0});
    err = std::max(err, std::abs(s - m({r, 0.0})));
  }
  EXPECT_LT(err, 1e-10);
}

}  // namespace
}  // namespace maxmult::symbols
