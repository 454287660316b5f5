#include "maxmult/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "maxmult/partition.hpp"

namespace maxmult::symbols {

namespace {

constexpr int kOversampleLog2 = 3;

double pow_sum(std::span<const Complex> values, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  if (q == 2.0) {
    for (const auto& v : values) s += std::norm(v);
  } else {
    for (const auto& v : values) s += std::pow(std::abs(v), q);
  }
  return s;
}

double norm_with_cell(std::span<const Complex> values, double q, double cell) {
  if (!(q >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  const double s = pow_sum(values, q);
  if (std::isinf(q)) return s;
  return std::pow(s * cell, 1.0 / q);
}

double frequency_cell(const Grid& grid) { return std::pow(1.0 / grid.extent, grid.dim); }

// Continuous inverse transform: K(x) = sum_xi g(xi) e^{2 pi i x xi} (1/E)^d.
std::vector<Complex> kernel_of(const Grid& grid, std::vector<Complex> g) {
  inverse_fft_inplace(grid, g);
  const double scale = frequency_cell(grid);
  for (auto& v : g) v *= scale;
  return g;
}

// Continuous forward transform back to the frequency side.
std::vector<Complex> symbol_of(const Grid& grid, std::vector<Complex> kernel) {
  forward_fft_inplace(grid, kernel);
  const double scale = std::pow(grid.extent, grid.dim);
  for (auto& v : kernel) v *= scale;
  return kernel;
}

void check_analysis_grid(const Grid& g) {
  const double l = std::log2(g.extent);
  if (l != std::floor(l) || l < 1.0) throw std::invalid_argument("analysis grid extent must be 2^L with L >= 1");
}

struct EtaTable {
  std::vector<std::vector<double>> eta;
  EtaTable(const Grid& grid, int ell_max) {
    const PartitionBank bank(grid);
    for (int ell = 0; ell <= ell_max; ++ell) eta.push_back(bank.sample_eta(ell));
  }
};

std::vector<double> ell_terms(const Grid& grid, std::span<const Complex> kernel, const EtaTable& table, double q,
                              double alpha) {
  std::vector<double> terms;
  std::vector<Complex> piece(kernel.size());
  for (std::size_t ell = 0; ell < table.eta.size(); ++ell) {
    const auto& eta = table.eta[ell];
    for (std::size_t i = 0; i < piece.size(); ++i) piece[i] = kernel[i] * eta[i];
    terms.push_back(std::pow(2.0, static_cast<double>(ell) * alpha) *
                    physical_lq_norm(grid, piece, q));
  }
  return terms;
}

double tail_of(const std::vector<double>& terms, double total) {
  if (terms.size() < 2) return kInfinity;
  const double last = terms.back();
  if (last == 0.0) return 0.0;
  const double prev = terms[terms.size() - 2];
  const double rho = prev > 0.0 ? last / prev : kInfinity;
  if (rho < 1.0) return last * rho / (1.0 - rho);
  // Terms sitting at the roundoff floor no longer decay; they are negligible anyway.
  if (last <= 1e-10 * total) return last;
  return kInfinity;
}

OctaveRange default_octaves(const SpectralSymbol& m) {
  if (m.octaves()) return {m.octaves()->first - 1, m.octaves()->last + 1};
  // Closed forms without a declared support are probed on a fixed window.
  return {-4, 4};
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Grid make_analysis_grid(int dim, int log2_extent) {
  if (log2_extent < 1) throw std::invalid_argument("analysis grid needs log2_extent >= 1");
  return Grid::make(dim, log2_extent + kOversampleLog2, std::ldexp(1.0, log2_extent));
}

int log2_extent(const Grid& analysis) {
  check_analysis_grid(analysis);
  return static_cast<int>(std::lround(std::log2(analysis.extent)));
}

double physical_lq_norm(const Grid& grid, std::span<const Complex> values, double q) {
  return norm_with_cell(values, q, grid.cell_volume());
}

SymbolPiece octave_piece(const SpectralSymbol& m, int k, const Grid& analysis) {
  const auto dilated = m.dilated(k);
  auto values = dilated.sample(analysis);
  const auto radii = frequency_radii(analysis);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= profile::phi(radii[i]);
  return {analysis, std::move(values)};
}

Signal piece_kernel(const SymbolPiece& piece) { return Signal(piece.grid, kernel_of(piece.grid, piece.values)); }

std::vector<KernelPiece> kernel_pieces(const SpectralSymbol& m, int k, int ell_max, const Grid& analysis) {
  const int l = log2_extent(analysis);
  if (ell_max < 0 || ell_max > l - 1)
    throw std::invalid_argument("ell_max " + std::to_string(ell_max) + " exceeds the analysis grid range (max " +
                                std::to_string(l - 1) + ")");
  const auto kernel = kernel_of(analysis, octave_piece(m, k, analysis).values);
  const EtaTable table(analysis, ell_max);
  std::vector<KernelPiece> out;
  for (int ell = 0; ell <= ell_max; ++ell) {
    const auto& eta = table.eta[static_cast<std::size_t>(ell)];
    std::vector<Complex> v(kernel.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = kernel[i] * eta[i];
    out.push_back({k, ell, Signal(analysis, std::move(v))});
  }
  return out;
}

double y_octave_sum(const SpectralSymbol& m, int k, double q, double alpha, const Grid& analysis) {
  const EtaTable table(analysis, log2_extent(analysis) - 1);
  const auto kernel = kernel_of(analysis, octave_piece(m, k, analysis).values);
  double s = 0.0;
  for (double t : ell_terms(analysis, kernel, table, q, alpha)) s += t;
  return s;
}

YNorm y_norm(const SpectralSymbol& m, double q, double alpha, const Grid& analysis, std::optional<OctaveRange> octaves) {
  if (!(q >= 1.0)) throw std::invalid_argument("y_norm requires q >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("y_norm requires alpha >= 0");
  const OctaveRange range = octaves ? *octaves : default_octaves(m);
  const EtaTable table(analysis, log2_extent(analysis) - 1);
  YNorm out;
  out.octaves = range;
  out.argmax_octave = range.first;
  for (int k = range.first; k <= range.last; ++k) {
    const auto kernel = kernel_of(analysis, octave_piece(m, k, analysis).values);
    const auto terms = ell_terms(analysis, kernel, table, q, alpha);
    double s = 0.0;
    for (double t : terms) s += t;
    out.per_octave.push_back(s);
    if (s > out.value) {
      out.value = s;
      out.argmax_octave = k;
      out.tail_estimate = tail_of(terms, s);
    }
  }
  return out;
}

double besov_norm(const SymbolPiece& g, double r, double alpha) {
  if (!(r >= 1.0)) throw std::invalid_argument("besov_norm requires r >= 1");
  const Grid& grid = g.grid;
  const auto kernel = kernel_of(grid, g.values);
  const EtaTable table(grid, log2_extent(grid) - 1);
  double s = 0.0;
  std::vector<Complex> piece(kernel.size());
  for (std::size_t ell = 0; ell < table.eta.size(); ++ell) {
    for (std::size_t i = 0; i < piece.size(); ++i) piece[i] = kernel[i] * table.eta[ell][i];
    const auto conv = symbol_of(grid, piece);
    s += std::pow(2.0, static_cast<double>(ell) * alpha) * norm_with_cell(conv, r, frequency_cell(grid));
  }
  return s;
}

double sobolev_norm(const SymbolPiece& g, double q, double alpha) {
  const Grid& grid = g.grid;
  auto kernel = kernel_of(grid, g.values);
  const auto radii = centered_radii(grid);
  for (std::size_t i = 0; i < kernel.size(); ++i) kernel[i] *= std::pow(1.0 + radii[i] * radii[i], alpha / 2.0);
  const auto weighted = symbol_of(grid, std::move(kernel));
  return norm_with_cell(weighted, q, frequency_cell(grid));
}

double OctaveProfile::at(int k) const {
  if (!octaves.contains(k)) return 0.0;
  return omega[static_cast<std::size_t>(k - octaves.first)];
}

OctaveProfile octave_profile(const SpectralSymbol& m, double q, double alpha, const Grid& analysis,
                             std::optional<OctaveRange> octaves) {
  OctaveProfile p;
  p.octaves = octaves ? *octaves : default_octaves(m);
  for (int k = p.octaves.first; k <= p.octaves.last; ++k)
    p.omega.push_back(sobolev_norm(octave_piece(m, k, analysis), q, alpha));
  p.omega_star = nonincreasing_rearrangement(p.omega);
  return p;
}

SpectralSymbol random_mikhlin_member(std::size_t index, std::uint64_t seed, MikhlinKind kind, OctaveRange octaves) {
  if (octaves.size() <= 0) throw std::invalid_argument("empty octave range");
  const std::uint64_t member_seed = splitmix(splitmix(seed) ^ (static_cast<std::uint64_t>(index) + 1));
  std::mt19937_64 rng(member_seed);
  std::vector<Complex> coeffs(static_cast<std::size_t>(octaves.size()));
  if (kind == MikhlinKind::signs) {
    std::bernoulli_distribution coin(0.5);
    for (auto& c : coeffs) c = coin(rng) ? 1.0 : -1.0;
  } else {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (auto& c : coeffs) c = std::polar(1.0, angle(rng));
  }
  const std::string name = std::string(kind == MikhlinKind::signs ? "mikhlin_signs_" : "mikhlin_phases_") +
                           std::to_string(index);
  return SpectralSymbol::octave_series(octaves.first, std::move(coeffs), name, member_seed);
}

std::vector<SpectralSymbol> random_mikhlin(std::size_t count, std::uint64_t seed, MikhlinKind kind,
                                           OctaveRange octaves) {
  if (count == 0) throw std::invalid_argument("random_mikhlin needs count >= 1");
  std::vector<SpectralSymbol> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_mikhlin_member(i, seed, kind, octaves));
  return out;
}

double mikhlin_bound(MikhlinKind kind, double q, double alpha, const Grid& analysis) {
  // phi m(2^k .) only sees the coefficients at octaves k - 1, k, k + 1.
  if (kind == MikhlinKind::signs) {
    double best = 0.0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          const auto m = SpectralSymbol::octave_series(-1, {double(a), double(b), double(c)});
          best = std::max(best, y_octave_sum(m, 0, q, alpha, analysis));
        }
    return best;
  }
  double bound = 0.0;
  for (int pos = -1; pos <= 1; ++pos) {
    const auto m = SpectralSymbol::octave_series(pos, {1.0});
    bound += y_octave_sum(m, 0, q, alpha, analysis);
  }
  return bound;
}

std::vector<double> nonincreasing_rearrangement(std::span<const double> gamma) {
  std::vector<double> out(gamma.size());
  std::transform(gamma.begin(), gamma.end(), out.begin(), [](double v) { return std::abs(v); });
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double orlicz_expl_norm(std::span<const double> gamma) {
  const auto star = nonincreasing_rearrangement(gamma);
  double best = 0.0;
  for (std::size_t l = 0; l < star.size(); ++l) best = std::max(best, std::log(static_cast<double>(l) + 2.0) * star[l]);
  return best;
}

bool shifts_disjoint(std::span<const long> basis, const std::vector<std::vector<int>>& sets) {
  for (const auto& set : sets) {
    std::set<long> seen;
    for (long b : basis)
      for (int k : set)
        if (!seen.insert(b + k).second) return false;
  }
  return true;
}

bool shifts_cover(std::span<const long> basis, long window, OctaveRange range) {
  for (long t = range.first; t <= range.last; ++t) {
    bool hit = false;
    for (long b : basis)
      if (std::labs(t - b) <= window) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

DilationSplit dilation_split(const SpectralSymbol& m, const OctaveProfile& profile) {
  if (profile.omega.size() != static_cast<std::size_t>(profile.octaves.size()) ||
      profile.omega_star.size() != profile.omega.size())
    throw std::invalid_argument("octave profile is inconsistent");
  if (m.octaves() && !(profile.octaves == OctaveRange{m.octaves()->first - 1, m.octaves()->last + 1}))
    throw std::invalid_argument("octave profile was not computed for this symbol");

  const std::size_t n = profile.omega_star.size();
  DilationSplit split;
  split.cover_range = profile.octaves;

  std::vector<std::vector<int>> sets;
  // j = 0 collects the octaves above omega*(2); j >= 1 uses the band
  // (omega*(2^{2^j}), omega*(2^{2^{j-1}})], indices past the range read as 0.
  for (int j = 0;; ++j) {
    const std::uint64_t upper = j == 0 ? 0 : (std::uint64_t{1} << (std::uint64_t{1} << (j - 1)));
    const std::uint64_t lower = j >= 6 ? std::numeric_limits<std::uint64_t>::max()
                                       : (std::uint64_t{1} << (std::uint64_t{1} << j));
    const double hi = j == 0 ? kInfinity : profile.star(upper);
    const double lo = lower >= n ? 0.0 : profile.star(lower);
    std::vector<int> octs;
    for (int k = profile.octaves.first; k <= profile.octaves.last; ++k) {
      const double w = profile.at(k);
      if (w > lo && w <= hi) octs.push_back(k);
    }
    if (!octs.empty()) {
      std::vector<Complex> ind(static_cast<std::size_t>(octs.back() - octs.front() + 1), 0.0);
      for (int k : octs) ind[static_cast<std::size_t>(k - octs.front())] = 1.0;
      DilationPiece piece{j,
                          octs,
                          m.times(SpectralSymbol::octave_series(octs.front(), std::move(ind), "annuli")),
                          lower,
                          upper,
                          lower >= n,
                          std::pow(2.0, j / 2.0) * profile.star(upper)};
      sets.push_back(piece.octaves);
      split.pieces.push_back(std::move(piece));
    }
    if (lower >= n) break;
  }

  std::set<long> forbidden;
  for (const auto& s : sets)
    for (int a : s)
      for (int b : s)
        if (a != b) forbidden.insert(static_cast<long>(a) - b);
  for (long t = profile.octaves.first; t <= profile.octaves.last; ++t) {
    bool ok = true;
    for (long b : split.shift_basis)
      if (forbidden.count(t - b)) {
        ok = false;
        break;
      }
    if (ok) split.shift_basis.push_back(t);
  }
  for (long t = profile.octaves.first; t <= profile.octaves.last; ++t) {
    long nearest = std::numeric_limits<long>::max();
    for (long b : split.shift_basis) nearest = std::min(nearest, std::labs(t - b));
    split.window = std::max(split.window, nearest);
  }
  split.disjoint = shifts_disjoint(split.shift_basis, sets);
  split.covers = shifts_cover(split.shift_basis, split.window, split.cover_range);
  return split;
}

}  // namespace maxmult::symbols
