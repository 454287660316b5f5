#include "maxmult/test_bank.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "maxmult/partition.hpp"

namespace maxmult {

namespace {

Signal normalized(const Grid& grid, std::vector<Complex> data) {
  Signal s(grid, std::move(data));
  const double n = lp_norm(s, 2.0);
  if (!(n > 0.0)) throw std::runtime_error("bank signal vanished");
  return Complex(1.0 / n, 0.0) * s;
}

std::vector<Complex> real_part(std::vector<Complex> v) {
  for (auto& x : v) x = {x.real(), 0.0};
  return v;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t x = master * 0x9e3779b97f4a7c15ULL + index + 0x632be59bd9b4e019ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

OctaveRange bank_octaves(const Grid& grid) {
  if (grid.log2_size < 6) throw std::invalid_argument("test bank needs J >= 6");
  return {2, grid.log2_size - 3};
}

Signal random_band_signal(const Grid& grid, std::uint64_t seed) {
  const auto octs = bank_octaves(grid);
  const PartitionBank bank(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> noise(grid.total_samples());
  for (auto& c : noise) c = {gauss(rng), gauss(rng)};
  std::vector<Complex> spectrum(grid.total_samples(), 0.0);
  for (int k = octs.first; k <= octs.last; ++k) {
    const auto phi = bank.sample(Profile::phi, k);
    double energy = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) energy += std::norm(noise[i] * phi[i]);
    const double w = energy > 0.0 ? 1.0 / std::sqrt(energy) : 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) spectrum[i] += w * phi[i] * noise[i];
  }
  inverse_fft_inplace(grid, spectrum);
  return normalized(grid, real_part(std::move(spectrum)));
}

Signal wave_packet(const Grid& grid, int k, const Frequency& x0) {
  const auto octs = bank_octaves(grid);
  if (!octs.contains(k)) throw std::out_of_range("wave packet octave outside the bank band");
  const PartitionBank bank(grid);
  const auto phi = bank.sample(Profile::phi, k);
  const auto freqs = frequency_vectors(grid);
  std::vector<Complex> spectrum(grid.total_samples());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double phase = -2.0 * std::numbers::pi * (freqs[i][0] * x0[0] + (grid.dim == 2 ? freqs[i][1] * x0[1] : 0.0));
    spectrum[i] = phi[i] * std::polar(1.0, phase);
  }
  inverse_fft_inplace(grid, spectrum);
  return normalized(grid, std::move(spectrum));
}

Signal smoothed_indicator(const Grid& grid, const Frequency& lo, double side) {
  if (!(side > 0.0)) throw std::invalid_argument("indicator side must be positive");
  const auto octs = bank_octaves(grid);
  std::vector<Complex> data(grid.total_samples());
  auto inside = [&](double x, double a) {
    const double t = std::fmod(x - a + 2.0 * grid.extent, grid.extent);
    return t < side;
  };
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto c = grid.coordinate(i);
    bool in = inside(c[0], lo[0]);
    if (grid.dim == 2) in = in && inside(c[1], lo[1]);
    data[i] = in ? 1.0 : 0.0;
  }
  forward_fft_inplace(grid, data);
  const auto window = band_symbol(octs).sample(grid);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= window[i];
  inverse_fft_inplace(grid, data);
  return normalized(grid, std::move(data));
}

std::vector<BankSignal> make_test_bank(const Grid& grid, const BankSpec& spec, std::uint64_t seed) {
  const auto octs = bank_octaves(grid);
  std::vector<BankSignal> out;
  std::uint64_t index = 0;
  for (int i = 0; i < spec.random; ++i) out.push_back({"random", random_band_signal(grid, derive_seed(seed, index++))});
  for (int i = 0; i < spec.packets; ++i) {
    std::mt19937_64 rng(derive_seed(seed, index++));
    std::uniform_int_distribution<int> oct(octs.first, octs.last);
    std::uniform_real_distribution<double> pos(0.0, grid.extent);
    const int k = oct(rng);
    const Frequency x0{pos(rng), pos(rng)};
    out.push_back({"packet", wave_packet(grid, k, x0)});
  }
  for (int i = 0; i < spec.indicators; ++i) {
    std::mt19937_64 rng(derive_seed(seed, index++));
    std::uniform_real_distribution<double> pos(0.0, grid.extent);
    std::uniform_real_distribution<double> len(0.1 * grid.extent, 0.5 * grid.extent);
    const Frequency lo{pos(rng), pos(rng)};
    out.push_back({"indicator", smoothed_indicator(grid, lo, len(rng))});
  }
  return out;
}

}  // namespace maxmult
