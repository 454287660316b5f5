#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace maxmult {

using Complex = std::complex<double>;

/// Physical frequency vector. Only the first `dim` components are used.
using Frequency = std::array<double, 2>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Periodic dyadic grid on [0, extent)^dim with 2^log2_size samples per axis.
///
/// Samples are stored row-major (last axis fastest). Spectrum positions use
/// the usual FFT ordering: position p on an axis carries frequency index p
/// for p < n/2 and p - n otherwise, i.e. indices span {-n/2, ..., n/2 - 1}.
/// The physical frequency of index m is m / extent.
struct Grid {
  int dim = 1;
  int log2_size = 10;
  double extent = 1.0;

  /// Validating constructor; throws std::invalid_argument.
  static Grid make(int dim, int log2_size, double extent = 1.0);

  std::size_t samples_per_axis() const { return std::size_t{1} << log2_size; }
  std::size_t total_samples() const;
  double spacing() const { return extent / static_cast<double>(samples_per_axis()); }
  /// Cell volume spacing()^dim.
  double cell_volume() const;

  /// Largest Littlewood-Paley octave k with 1 <= k <= J - 2.
  int max_usable_octave() const { return log2_size - 2; }
  bool is_usable_octave(int k) const { return k >= 1 && k <= max_usable_octave(); }

  long frequency_index(std::size_t axis_position) const;
  Frequency frequency(std::size_t flat_position) const;
  /// Physical coordinate of a sample along each axis.
  std::array<double, 2> coordinate(std::size_t flat_position) const;

  bool operator==(const Grid&) const = default;
};

/// |xi| for every spectrum position, in physical units.
std::vector<double> frequency_radii(const Grid& grid);
/// Full frequency vectors for every spectrum position.
std::vector<Frequency> frequency_vectors(const Grid& grid);

/// Complex samples on a grid. Immutable after construction.
class Signal {
 public:
  explicit Signal(const Grid& grid);
  Signal(const Grid& grid, std::vector<Complex> samples);
  Signal(const Grid& grid, std::span<const double> real_samples);

  /// Infers the grid from the sample count; rejects zero and non-power-of-two sizes.
  static Signal from_samples(std::vector<Complex> samples, int dim = 1, double extent = 1.0);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> samples() const { return samples_; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }

  /// Pointwise |f|.
  std::vector<double> magnitudes() const;

  friend Signal operator+(const Signal& a, const Signal& b);
  friend Signal operator-(const Signal& a, const Signal& b);
  friend Signal operator*(Complex c, const Signal& a);

 private:
  Grid grid_;
  std::vector<Complex> samples_;
};

/// Fourier coefficients of a Signal, stored in FFT order.
class Spectrum {
 public:
  explicit Spectrum(const Grid& grid);
  Spectrum(const Grid& grid, std::vector<Complex> coefficients);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  const Complex& operator[](std::size_t i) const { return coefficients_[i]; }
  std::size_t size() const { return coefficients_.size(); }

 private:
  Grid grid_;
  std::vector<Complex> coefficients_;
};

/// F(xi) = n^{-dim} sum_x f(x) e^{-2 pi i x.xi}; the zero coefficient is the mean.
Spectrum transform(const Signal& f);
/// f(x) = sum_xi F(xi) e^{2 pi i x.xi}.
Signal inverse_transform(const Spectrum& spectrum);

/// In-place helpers on raw FFT-ordered arrays of the grid's size.
void forward_fft_inplace(const Grid& grid, std::vector<Complex>& data);
void inverse_fft_inplace(const Grid& grid, std::vector<Complex>& data);

/// Riemann-sum norm (mean |f|^p)^{1/p}; p = kInfinity gives the max norm.
double lp_norm(const Signal& f, double p);
double lp_norm(const Grid& grid, std::span<const double> values, double p);
/// sqrt(sum |F|^2); equals lp_norm(f, 2) by Parseval.
double spectrum_l2_norm(const Spectrum& spectrum);

}  // namespace maxmult
