#pragma once

#include <span>
#include <vector>

#include "maxmult/grid.hpp"
#include "maxmult/partition.hpp"
#include "maxmult/symbol.hpp"

namespace maxmult::multiplier {

/// F^{-1}[m f^].
Signal apply_symbol(const SpectralSymbol& m, const Signal& f);
/// F^{-1}[values f^] for a multiplier already sampled in FFT order.
Signal apply_sampled(std::span<const Complex> values, const Signal& f);
Signal apply_sampled(std::span<const double> values, const Signal& f);

/// Octave-localized operators:
///   T_k:      phi(2^{-k} xi) m(xi)
///   L_k:      psi(2^{-k} xi)          (no m factor)
///   B_k:      beta(2^{-k} xi)
///   Ltilde_k: psi_tilde(2^{-k} xi)
enum class BandKind { T, L, B, Ltilde };

/// Multiplier of a band operator sampled on the grid. `m` is required for T.
std::vector<Complex> band_multiplier(BandKind kind, int k, const Grid& grid, const SpectralSymbol* m = nullptr);

/// Applies a band operator; octave k must satisfy 1 <= k <= J - 2.
Signal band_operator(BandKind kind, int k, const Signal& f, const SpectralSymbol* m = nullptr);
/// Same as band_operator without the usable-octave restriction (used by the decay fits).
Signal band_operator_any(BandKind kind, int k, const Signal& f, const SpectralSymbol* m = nullptr);

/// Centered maximal average of a nonnegative field over cubes of half-width
/// {0, 1, 2, 4, ..., n/4} samples with periodic wraparound.
std::vector<double> dyadic_maximal(const Grid& grid, std::span<const double> values);

/// M_r f = (M |f|^r)^{1/r}; r >= 1.
Signal hl_maximal(const Signal& f, double r = 1.0);
std::vector<double> hl_maximal_values(const Grid& grid, std::span<const double> magnitudes, double r);

/// (M o M o M (|f|^r))^{1/r}.
Signal grand_maximal(const Signal& f, double r = 1.0);
std::vector<double> grand_maximal_values(const Grid& grid, std::span<const double> magnitudes, double r);

/// G_r(f) = (sum_k (M o M o M [|L_k f|^r])^{2/r})^{1/2} over the usable octaves; 1 < r < 2.
Signal g_function(const Signal& f, double r);
std::vector<double> g_function_values(const Signal& f, double r);

}  // namespace maxmult::multiplier
