#include "maxmult/multiplier.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <stdexcept>
#include <string>

namespace maxmult::multiplier {

namespace {

void check_r(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument("maximal exponent r must be >= 1");
}

std::vector<double> powered(std::span<const double> v, double r) {
  std::vector<double> out(v.size());
  if (r == 1.0) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]);
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(std::abs(v[i]), r);
  }
  return out;
}

void root_inplace(std::vector<double>& v, double r) {
  if (r == 1.0) return;
  for (double& x : v) x = std::pow(x, 1.0 / r);
}

std::vector<double> maximal_1d(std::size_t n, std::span<const double> v) {
  // Periodic prefix sums over a doubled array; long double keeps small windows accurate.
  std::vector<long double> prefix(2 * n + 1, 0.0L);
  for (std::size_t i = 0; i < 2 * n; ++i) prefix[i + 1] = prefix[i] + v[i % n];
  std::vector<double> out(v.begin(), v.end());
  for (std::size_t w = 1; w <= n / 4; w *= 2) {
    const long double width = static_cast<long double>(2 * w + 1);
    for (std::size_t x = 0; x < n; ++x) {
      // Window [x - w, x + w] shifted by n to stay nonnegative.
      const std::size_t lo = x + n - w;
      const std::size_t hi = x + n + w + 1;
      const auto sum = hi <= 2 * n ? prefix[hi] - prefix[lo] : prefix[2 * n] - prefix[lo] + prefix[hi - 2 * n];
      out[x] = std::max(out[x], static_cast<double>(sum / width));
    }
  }
  return out;
}

// Splits the periodic index interval [start, start + length) into at most two plain ranges.
int wrap_parts(long start, long length, long n, std::array<std::pair<long, long>, 2>& parts) {
  start = ((start % n) + n) % n;
  if (start + length <= n) {
    parts[0] = {start, start + length};
    return 1;
  }
  parts[0] = {start, n};
  parts[1] = {0, start + length - n};
  return 2;
}

std::vector<double> maximal_2d(std::size_t n, std::span<const double> v) {
  const std::size_t stride = n + 1;
  std::vector<long double> sat(stride * stride, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    long double row = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      row += v[i * n + j];
      sat[(i + 1) * stride + (j + 1)] = sat[i * stride + (j + 1)] + row;
    }
  }
  auto rect = [&](long r0, long r1, long c0, long c1) {
    return sat[r1 * stride + c1] - sat[r0 * stride + c1] - sat[r1 * stride + c0] + sat[r0 * stride + c0];
  };
  const long ln = static_cast<long>(n);
  std::vector<double> out(v.begin(), v.end());
  std::array<std::pair<long, long>, 2> rows{};
  std::array<std::pair<long, long>, 2> cols{};
  for (std::size_t w = 1; w <= n / 4; w *= 2) {
    const long width = static_cast<long>(2 * w + 1);
    const long double area = static_cast<long double>(width * width);
    for (long i = 0; i < ln; ++i) {
      const int nr = wrap_parts(i - static_cast<long>(w), width, ln, rows);
      for (long j = 0; j < ln; ++j) {
        const int nc = wrap_parts(j - static_cast<long>(w), width, ln, cols);
        long double sum = 0.0L;
        for (int a = 0; a < nr; ++a)
          for (int b = 0; b < nc; ++b) sum += rect(rows[a].first, rows[a].second, cols[b].first, cols[b].second);
        auto& o = out[static_cast<std::size_t>(i * ln + j)];
        o = std::max(o, static_cast<double>(sum / area));
      }
    }
  }
  return out;
}

}  // namespace

Signal apply_sampled(std::span<const Complex> values, const Signal& f) {
  if (values.size() != f.size()) throw std::invalid_argument("multiplier size does not match signal grid");
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  forward_fft_inplace(f.grid(), data);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= values[i];
  inverse_fft_inplace(f.grid(), data);
  return Signal(f.grid(), std::move(data));
}

Signal apply_sampled(std::span<const double> values, const Signal& f) {
  if (values.size() != f.size()) throw std::invalid_argument("multiplier size does not match signal grid");
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  forward_fft_inplace(f.grid(), data);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= values[i];
  inverse_fft_inplace(f.grid(), data);
  return Signal(f.grid(), std::move(data));
}

Signal apply_symbol(const SpectralSymbol& m, const Signal& f) {
  const auto values = m.sample(f.grid());
  return apply_sampled(std::span<const Complex>(values), f);
}

std::vector<Complex> band_multiplier(BandKind kind, int k, const Grid& grid, const SpectralSymbol* m) {
  const PartitionBank bank(grid);
  std::vector<Complex> out(grid.total_samples());
  switch (kind) {
    case BandKind::T: {
      if (m == nullptr) throw std::invalid_argument("band operator T_k requires a symbol");
      const auto phi = bank.sample(Profile::phi, k);
      const auto mv = m->sample(grid);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi[i] * mv[i];
      return out;
    }
    case BandKind::L: {
      const auto v = bank.sample(Profile::psi, k);
      std::copy(v.begin(), v.end(), out.begin());
      return out;
    }
    case BandKind::B: {
      const auto v = bank.sample(Profile::beta, k);
      std::copy(v.begin(), v.end(), out.begin());
      return out;
    }
    case BandKind::Ltilde: {
      const auto v = bank.sample(Profile::psi_tilde, k);
      std::copy(v.begin(), v.end(), out.begin());
      return out;
    }
  }
  return out;
}

Signal band_operator_any(BandKind kind, int k, const Signal& f, const SpectralSymbol* m) {
  const auto values = band_multiplier(kind, k, f.grid(), m);
  return apply_sampled(std::span<const Complex>(values), f);
}

Signal band_operator(BandKind kind, int k, const Signal& f, const SpectralSymbol* m) {
  if (!f.grid().is_usable_octave(k))
    throw std::out_of_range("octave " + std::to_string(k) + " outside the usable range [1, J-2]");
  if (kind == BandKind::T && m == nullptr) throw std::invalid_argument("band operator T_k requires a symbol");
  return band_operator_any(kind, k, f, m);
}

std::vector<double> dyadic_maximal(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.total_samples()) throw std::invalid_argument("field size does not match grid");
  const std::size_t n = grid.samples_per_axis();
  return grid.dim == 1 ? maximal_1d(n, values) : maximal_2d(n, values);
}

std::vector<double> hl_maximal_values(const Grid& grid, std::span<const double> magnitudes, double r) {
  check_r(r);
  auto out = dyadic_maximal(grid, powered(magnitudes, r));
  root_inplace(out, r);
  return out;
}

Signal hl_maximal(const Signal& f, double r) {
  const auto mags = f.magnitudes();
  return Signal(f.grid(), hl_maximal_values(f.grid(), mags, r));
}

std::vector<double> grand_maximal_values(const Grid& grid, std::span<const double> magnitudes, double r) {
  check_r(r);
  auto v = dyadic_maximal(grid, powered(magnitudes, r));
  v = dyadic_maximal(grid, v);
  v = dyadic_maximal(grid, v);
  root_inplace(v, r);
  return v;
}

Signal grand_maximal(const Signal& f, double r) {
  const auto mags = f.magnitudes();
  return Signal(f.grid(), grand_maximal_values(f.grid(), mags, r));
}

std::vector<double> g_function_values(const Signal& f, double r) {
  if (!(r > 1.0 && r < 2.0)) throw std::invalid_argument("g_function requires 1 < r < 2");
  const Grid& grid = f.grid();
  const PartitionBank bank(grid);
  std::vector<Complex> spectrum(f.samples().begin(), f.samples().end());
  forward_fft_inplace(grid, spectrum);
  std::vector<double> sum(grid.total_samples(), 0.0);
  std::vector<Complex> piece(grid.total_samples());
  // Fixed ascending octave order keeps the reduction bit-reproducible.
  for (int k = 1; k <= grid.max_usable_octave(); ++k) {
    const auto psi = bank.sample(Profile::psi, k);
    for (std::size_t i = 0; i < piece.size(); ++i) piece[i] = spectrum[i] * psi[i];
    inverse_fft_inplace(grid, piece);
    std::vector<double> mags(piece.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(piece[i]);
    const auto g = grand_maximal_values(grid, mags, r);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g[i] * g[i];
  }
  for (double& s : sum) s = std::sqrt(s);
  return sum;
}

Signal g_function(const Signal& f, double r) { return Signal(f.grid(), g_function_values(f, r)); }

}  // namespace maxmult::multiplier
