#pragma once

#include <vector>

#include "maxmult/grid.hpp"

namespace maxmult {

/// Smooth transition: 1 for t <= 1, 0 for t >= 2, C-infinity in between.
double smooth_step(double t);

/// Radial cutoff profiles, as functions of |xi| (or |x| for the eta family).
namespace profile {
/// phi(r) = smooth_step(r) - smooth_step(2r); supported in (1/2, 2); sum_k phi(2^{-k} r) = 1.
double phi(double r);
/// 1 on [1/2, 2] = supp phi, supported in [1/4, 4].
double psi(double r);
/// Smooth, supported in [1/8, 8], nonvanishing on [1/4, 4], beta(0) = 0.
double beta(double r);
/// psi / beta^2 on (1/4, 4), zero elsewhere; psi_tilde * beta^2 = 1 on supp phi.
double psi_tilde(double r);
/// Even spatial cutoff: 1 on |x| <= 1/2, supported in |x| <= 1.
double eta0(double r);
/// eta_0(2^{-ell} x) - eta_0(2^{-ell+1} x) for ell > 0.
double eta(int ell, double r);
}  // namespace profile

enum class Profile { phi, psi, beta, psi_tilde };

/// The fixed cutoff system bound to one grid.
class PartitionBank {
 public:
  explicit PartitionBank(const Grid& grid);

  const Grid& grid() const { return grid_; }
  double phi(double r) const { return profile::phi(r); }
  double psi(double r) const { return profile::psi(r); }
  double beta(double r) const { return profile::beta(r); }
  double psi_tilde(double r) const { return profile::psi_tilde(r); }
  double eta(int ell, double r) const { return profile::eta(ell, r); }

  /// profile(2^{-k}|xi|) at every spectrum position of the grid.
  std::vector<double> sample(Profile which, int k) const;
  /// eta_ell(|x|) at every sample, with x taken as the periodic offset from the origin.
  std::vector<double> sample_eta(int ell) const;

 private:
  Grid grid_;
  std::vector<double> radii_;
};

/// Builds the bank; requires J >= 6 so several full octaves fit in the usable band.
PartitionBank build_partition(const Grid& grid);

/// Distance of each sample from the origin on the torus (signed offsets in [-extent/2, extent/2)).
std::vector<double> centered_radii(const Grid& grid);

}  // namespace maxmult
