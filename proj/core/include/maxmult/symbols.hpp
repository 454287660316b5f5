#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxmult/grid.hpp"
#include "maxmult/symbol.hpp"

/// Symbol-space norms and generators.
///
/// Symbol pieces phi(xi) m(2^k xi) live at unit frequency scale, while their
/// kernels spread over |x| ~ 2^ell. They are analysed on a separate grid of
/// extent 2^L whose frequency range covers |xi| <= 4, so that the continuous
/// Fourier transform is approximated by a Riemann sum with periodization at
/// scale 2^L.
namespace maxmult::symbols {

/// Analysis grid: extent 2^log2_extent, 2^{log2_extent + 3} samples per axis.
Grid make_analysis_grid(int dim = 1, int log2_extent = 10);
/// L such that the grid extent is 2^L.
int log2_extent(const Grid& analysis);

/// A function of xi sampled at the analysis grid's frequencies.
struct SymbolPiece {
  Grid grid;
  std::vector<Complex> values;
};

/// phi(xi) m(2^k xi).
SymbolPiece octave_piece(const SpectralSymbol& m, int k, const Grid& analysis);
/// Samples of the continuous inverse transform of a piece, x in [0, 2^L) periodic.
Signal piece_kernel(const SymbolPiece& piece);
/// (integral |v|^q dx)^{1/q} with the grid's physical cell volume.
double physical_lq_norm(const Grid& grid, std::span<const Complex> values, double q);

struct KernelPiece {
  int k = 0;
  int ell = 0;
  Signal values;
  double lq_norm(double q) const { return physical_lq_norm(values.grid(), values.samples(), q); }
};

/// H_{k,ell}[m] = eta_ell F^{-1}[phi m(2^k .)] for 0 <= ell <= ell_max.
/// Throws when 2^{ell_max} exceeds the half-extent of the analysis grid.
std::vector<KernelPiece> kernel_pieces(const SpectralSymbol& m, int k, int ell_max, const Grid& analysis);

struct YNorm {
  double value = 0.0;
  /// Geometric continuation of the last computed term; infinite when terms stop decaying.
  double tail_estimate = 0.0;
  int argmax_octave = 0;
  OctaveRange octaves;
  std::vector<double> per_octave;
};

/// sup_k sum_{ell < L} 2^{ell alpha} ||H_{k,ell}[m]||_q over the octaves where
/// phi m(2^k .) can be nonzero (the symbol's octave range widened by one).
YNorm y_norm(const SpectralSymbol& m, double q, double alpha, const Grid& analysis,
             std::optional<OctaveRange> octaves = std::nullopt);
/// Contribution of a single octave.
double y_octave_sum(const SpectralSymbol& m, int k, double q, double alpha, const Grid& analysis);

/// sum_ell 2^{ell alpha} ||g * eta_ell^||_{L^r(d xi)}.
double besov_norm(const SymbolPiece& g, double r, double alpha);
/// ||F^{-1}[(1 + |x|^2)^{alpha/2} F g]||_{L^q(d xi)}, with F g the kernel of g.
double sobolev_norm(const SymbolPiece& g, double q, double alpha);

struct OctaveProfile {
  OctaveRange octaves;
  /// omega(k) for k in octaves, indexed from octaves.first.
  std::vector<double> omega;
  /// Nonincreasing rearrangement of omega.
  std::vector<double> omega_star;

  double at(int k) const;
  /// omega*(l); zero beyond the truncated range.
  double star(std::size_t l) const { return l < omega_star.size() ? omega_star[l] : 0.0; }
};

/// omega(k) = sobolev_norm(phi m(2^k .), q, alpha) per octave.
OctaveProfile octave_profile(const SpectralSymbol& m, double q, double alpha, const Grid& analysis,
                             std::optional<OctaveRange> octaves = std::nullopt);

enum class MikhlinKind { signs, phases };

/// Default octave range of generated families; much wider than any function grid,
/// so that every local sign pattern occurs in each member.
inline constexpr OctaveRange kDefaultMikhlinOctaves{-2, 40};

/// m_i = sum_k eps_{i,k} phi(2^{-k} xi). Member i depends only on (seed, i),
/// so families are prefix-stable in the count.
std::vector<SpectralSymbol> random_mikhlin(std::size_t count, std::uint64_t seed, MikhlinKind kind,
                                           OctaveRange octaves = kDefaultMikhlinOctaves);
SpectralSymbol random_mikhlin_member(std::size_t index, std::uint64_t seed, MikhlinKind kind,
                                     OctaveRange octaves = kDefaultMikhlinOctaves);

/// Uniform Y(q, alpha) bound valid for every member of a family: the maximum
/// over all local coefficient patterns (signs) or the triangle-inequality bound (phases).
double mikhlin_bound(MikhlinKind kind, double q, double alpha, const Grid& analysis);

struct DilationPiece {
  int j = 0;
  std::vector<int> octaves;
  SpectralSymbol symbol;
  /// Threshold indices used for this piece, before clamping.
  std::uint64_t lower_index = 0;
  std::uint64_t upper_index = 0;
  bool clamped = false;
  /// 2^{j/2} omega*(upper_index), the piece's operator-norm envelope.
  double envelope = 0.0;
};

struct DilationSplit {
  std::vector<DilationPiece> pieces;
  std::vector<long> shift_basis;
  long window = 0;
  OctaveRange cover_range;
  bool disjoint = false;
  bool covers = false;
};

/// Splits m by the doubly exponential omega* thresholds and builds a greedy shift basis.
DilationSplit dilation_split(const SpectralSymbol& m, const OctaveProfile& profile);

/// Brute-force checks used by dilation_split, exposed for tests.
bool shifts_disjoint(std::span<const long> basis, const std::vector<std::vector<int>>& sets);
bool shifts_cover(std::span<const long> basis, long window, OctaveRange range);

/// Nonincreasing rearrangement of |gamma|.
std::vector<double> nonincreasing_rearrangement(std::span<const double> gamma);
/// sup_l log(l + 2) gamma*(l).
double orlicz_expl_norm(std::span<const double> gamma);

}  // namespace maxmult::symbols
