#pragma once

#include <Eigen/Dense>

#include "maxharm/grid.hpp"

namespace maxharm {

/// C^inf step: 0 for t <= 0, 1 for t >= 1, e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})
/// in between. Reproducible bit-exactly from the formula.
double smooth_step(double t);

/// Low-pass radial profile: 1 for r <= 1, 0 for r >= 2.
double phi_hat_radial(double r);

/// Annulus profile psi_hat(r) = phi_hat(r) - phi_hat(2r), supported on [1/2, 2].
double psi_hat_radial(double r);

/// Inhomogeneous Littlewood-Paley partition of unity on the frequency lattice
/// of a grid: phi_hat plus annuli psi_hat_k(xi) = psi_hat(2^{-k}|xi|),
/// k = 1..k_max. Radial in the Euclidean norm of the stacked frequency
/// variable of total dimension total_dim.
struct LpPartition {
  GridSpec spec;
  int total_dim = 1;
  int k_max = 0;
  // Per-window amplitude, index 0 = low pass. All ones for a partition of
  // unity; exposed so diagnostics can probe tampered partitions.
  Eigen::ArrayXd window_scale;

  double phi_hat(double r) const { return window_scale[0] * phi_hat_radial(r); }
  double psi_hat(int k, double r) const {
    return window_scale[k] * psi_hat_radial(std::ldexp(r, -k));
  }
  /// window(0, r) = phi_hat, window(k, r) = psi_hat_k.
  double window(int k, double r) const { return k == 0 ? phi_hat(r) : psi_hat(k, r); }
  double sum(double r) const {
    double s = phi_hat(r);
    for (int k = 1; k <= k_max; ++k) s += psi_hat(k, r);
    return s;
  }
  /// Radius below which the partition sums to one.
  double resolvable_band() const { return std::ldexp(1.0, k_max); }
};

/// Requires the grid to resolve at least 3 dyadic annuli (N/(2L) >= 8);
/// k_max = floor(log2(N/(2L))) - 1.
LpPartition build_partition(const GridSpec& spec, int total_dim);

struct PartitionCheck {
  double max_deviation = 0;          // |sum - 1| on the resolvable band
  double max_support_violation = 0;  // |window| outside its declared support
  double smoothness_proxy = 0;       // max second difference of the profiles
};

PartitionCheck partition_check(const LpPartition& p);

}  // namespace maxharm
