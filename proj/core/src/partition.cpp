#include "maxmult/partition.hpp"

#include <cmath>
#include <stdexcept>

namespace maxmult {

namespace {

double flat_bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Nonvanishing weight on (0, inf) that keeps beta from being trivially 1 on its plateau.
double beta_weight(double r) { return 2.0 * r / (1.0 + r * r); }

}  // namespace

double smooth_step(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = flat_bump(2.0 - t);
  const double b = flat_bump(t - 1.0);
  return a / (a + b);
}

namespace profile {

double phi(double r) { return smooth_step(r) - smooth_step(2.0 * r); }

double psi(double r) { return smooth_step(0.5 * r) - smooth_step(4.0 * r); }

double beta(double r) { return beta_weight(r) * (smooth_step(0.25 * r) - smooth_step(8.0 * r)); }

double psi_tilde(double r) {
  if (r <= 0.25 || r >= 4.0) return 0.0;
  const double b = beta(r);
  return psi(r) / (b * b);
}

double eta0(double r) { return smooth_step(2.0 * std::abs(r)); }

double eta(int ell, double r) {
  if (ell < 0) throw std::invalid_argument("eta index must be nonnegative");
  if (ell == 0) return eta0(r);
  return eta0(std::ldexp(r, -ell)) - eta0(std::ldexp(r, -ell + 1));
}

}  // namespace profile

std::vector<double> centered_radii(const Grid& grid) {
  const std::size_t n = grid.samples_per_axis();
  const double h = grid.spacing();
  auto offset = [&](std::size_t p) {
    const auto m = static_cast<long>(p);
    const auto half = static_cast<long>(n / 2);
    return static_cast<double>(m < half ? m : m - static_cast<long>(n)) * h;
  };
  std::vector<double> out(grid.total_samples());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = grid.dim == 1 ? std::abs(offset(i)) : std::hypot(offset(i / n), offset(i % n));
  }
  return out;
}

PartitionBank::PartitionBank(const Grid& grid) : grid_(grid), radii_(frequency_radii(grid)) {}

std::vector<double> PartitionBank::sample(Profile which, int k) const {
  std::vector<double> out(radii_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = std::ldexp(radii_[i], -k);
    switch (which) {
      case Profile::phi: out[i] = profile::phi(r); break;
      case Profile::psi: out[i] = profile::psi(r); break;
      case Profile::beta: out[i] = profile::beta(r); break;
      case Profile::psi_tilde: out[i] = profile::psi_tilde(r); break;
    }
  }
  return out;
}

std::vector<double> PartitionBank::sample_eta(int ell) const {
  const auto radii = centered_radii(grid_);
  std::vector<double> out(radii.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = profile::eta(ell, radii[i]);
  return out;
}

PartitionBank build_partition(const Grid& grid) {
  // The annulus {1/2 < |xi| < 2} at octave k needs 2^{k+1} below Nyquist for
  // at least a few octaves; J >= 6 leaves octaves 1..4 usable.
  if (grid.log2_size < 6) throw std::invalid_argument("grid too coarse to host the Littlewood-Paley annuli (J < 6)");
  return PartitionBank(grid);
}

}  // namespace maxmult
