#include "maxmult/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace maxmult {

namespace {

constexpr int kMaxLog2Size1d = 22;
constexpr int kMaxLog2Size2d = 12;

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (dim, n, sign) and never destroyed.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t total = dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
    std::vector<Complex> scratch(total);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, data, data, sign, flags)
                              : fftw_plan_dft_2d(n, n, data, data, sign, flags);
    if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const Grid& grid, std::vector<Complex>& data, int sign) {
  if (data.size() != grid.total_samples())
    throw std::invalid_argument("FFT buffer size does not match grid");
  fftw_plan plan = PlanCache::instance().get(grid.dim, static_cast<int>(grid.samples_per_axis()), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

Grid Grid::make(int dim, int log2_size, double extent) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
  const int max_log2 = dim == 1 ? kMaxLog2Size1d : kMaxLog2Size2d;
  if (log2_size < 1 || log2_size > max_log2)
    throw std::invalid_argument("grid log2_size out of range: " + std::to_string(log2_size));
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("grid extent must be positive");
  return Grid{dim, log2_size, extent};
}

std::size_t Grid::total_samples() const {
  const std::size_t n = samples_per_axis();
  return dim == 1 ? n : n * n;
}

double Grid::cell_volume() const { return dim == 1 ? spacing() : spacing() * spacing(); }

long Grid::frequency_index(std::size_t axis_position) const {
  const auto n = static_cast<long>(samples_per_axis());
  const auto p = static_cast<long>(axis_position);
  return p < n / 2 ? p : p - n;
}

Frequency Grid::frequency(std::size_t flat_position) const {
  const std::size_t n = samples_per_axis();
  if (dim == 1) return {static_cast<double>(frequency_index(flat_position)) / extent, 0.0};
  return {static_cast<double>(frequency_index(flat_position / n)) / extent,
          static_cast<double>(frequency_index(flat_position % n)) / extent};
}

std::array<double, 2> Grid::coordinate(std::size_t flat_position) const {
  const std::size_t n = samples_per_axis();
  if (dim == 1) return {static_cast<double>(flat_position) * spacing(), 0.0};
  return {static_cast<double>(flat_position / n) * spacing(),
          static_cast<double>(flat_position % n) * spacing()};
}

std::vector<double> frequency_radii(const Grid& grid) {
  std::vector<double> radii(grid.total_samples());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const Frequency xi = grid.frequency(i);
    radii[i] = grid.dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
  }
  return radii;
}

std::vector<Frequency> frequency_vectors(const Grid& grid) {
  std::vector<Frequency> out(grid.total_samples());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid.frequency(i);
  return out;
}

Signal::Signal(const Grid& grid) : grid_(grid), samples_(grid.total_samples()) {}

Signal::Signal(const Grid& grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.total_samples())
    throw std::invalid_argument("signal sample count does not match grid");
}

Signal::Signal(const Grid& grid, std::span<const double> real_samples) : grid_(grid) {
  if (real_samples.size() != grid_.total_samples())
    throw std::invalid_argument("signal sample count does not match grid");
  samples_.assign(real_samples.begin(), real_samples.end());
}

Signal Signal::from_samples(std::vector<Complex> samples, int dim, double extent) {
  const std::size_t total = samples.size();
  if (total == 0) throw std::invalid_argument("empty sample array");
  std::size_t per_axis = total;
  if (dim == 2) {
    per_axis = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(total))));
    if (per_axis * per_axis != total) throw std::invalid_argument("2-d sample array is not square");
  }
  if (!std::has_single_bit(per_axis)) throw std::invalid_argument("sample count is not a power of two");
  const int log2_size = std::countr_zero(per_axis);
  return Signal(Grid::make(dim, log2_size, extent), std::move(samples));
}

std::vector<double> Signal::magnitudes() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Complex& z) { return std::abs(z); });
  return out;
}

Signal operator+(const Signal& a, const Signal& b) {
  if (!(a.grid_ == b.grid_)) throw std::invalid_argument("incompatible grids");
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.samples_[i] + b.samples_[i];
  return Signal(a.grid_, std::move(out));
}

Signal operator-(const Signal& a, const Signal& b) {
  if (!(a.grid_ == b.grid_)) throw std::invalid_argument("incompatible grids");
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.samples_[i] - b.samples_[i];
  return Signal(a.grid_, std::move(out));
}

Signal operator*(Complex c, const Signal& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * a.samples_[i];
  return Signal(a.grid_, std::move(out));
}

Spectrum::Spectrum(const Grid& grid) : grid_(grid), coefficients_(grid.total_samples()) {}

Spectrum::Spectrum(const Grid& grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.total_samples())
    throw std::invalid_argument("spectrum size does not match grid");
}

void forward_fft_inplace(const Grid& grid, std::vector<Complex>& data) {
  execute(grid, data, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(grid.total_samples());
  for (auto& z : data) z *= scale;
}

void inverse_fft_inplace(const Grid& grid, std::vector<Complex>& data) { execute(grid, data, FFTW_BACKWARD); }

Spectrum transform(const Signal& f) {
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  forward_fft_inplace(f.grid(), data);
  return Spectrum(f.grid(), std::move(data));
}

Signal inverse_transform(const Spectrum& spectrum) {
  std::vector<Complex> data(spectrum.coefficients().begin(), spectrum.coefficients().end());
  inverse_fft_inplace(spectrum.grid(), data);
  return Signal(spectrum.grid(), std::move(data));
}

double lp_norm(const Grid& grid, std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  if (values.size() != grid.total_samples()) throw std::invalid_argument("value count does not match grid");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : values) sum += v * v;
    return std::sqrt(sum / static_cast<double>(values.size()));
  }
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(sum / static_cast<double>(values.size()), 1.0 / p);
}

double lp_norm(const Signal& f, double p) {
  const auto mags = f.magnitudes();
  return lp_norm(f.grid(), mags, p);
}

double spectrum_l2_norm(const Spectrum& spectrum) {
  double sum = 0.0;
  for (const auto& z : spectrum.coefficients()) sum += std::norm(z);
  return std::sqrt(sum);
}

}  // namespace maxmult
