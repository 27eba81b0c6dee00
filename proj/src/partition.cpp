#include "maxharm/partition.hpp"

#include <cmath>

namespace maxharm {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double phi_hat_radial(double r) { return smooth_step(2.0 - std::abs(r)); }

double psi_hat_radial(double r) { return phi_hat_radial(r) - phi_hat_radial(2.0 * r); }

LpPartition build_partition(const GridSpec& spec, int total_dim) {
  spec.validate();
  require(total_dim >= 1 && total_dim <= 4, "build_partition: total dimension out of range");
  double nyq = spec.nyquist();
  if (nyq < 8.0) {
    int needed = int(std::ceil(16.0 * spec.L));
    while (!is_power_of_two(needed)) ++needed;
    fail("build_partition: grid too coarse to resolve 3 dyadic annuli; need N >= " +
         std::to_string(needed));
  }
  LpPartition p;
  p.spec = spec;
  p.total_dim = total_dim;
  p.k_max = int(std::floor(std::log2(nyq))) - 1;
  p.window_scale = Eigen::ArrayXd::Ones(p.k_max + 1);
  return p;
}

PartitionCheck partition_check(const LpPartition& p) {
  PartitionCheck out;
  const int N = p.spec.N;
  const double band = p.resolvable_band();

  // Deviation from 1 over all lattice frequencies inside the band.
  std::int64_t total = 1;
  for (int a = 0; a < p.total_dim; ++a) total *= N;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx;
    double r2 = 0.0;
    for (int a = 0; a < p.total_dim; ++a) {
      double xi = p.spec.freq(int(rem % N));
      rem /= N;
      r2 += xi * xi;
    }
    double r = std::sqrt(r2);
    if (r <= band) out.max_deviation = std::max(out.max_deviation, std::abs(p.sum(r) - 1.0));
  }

  // Support violations and smoothness, probed on a fine radial lattice.
  const double dr = p.spec.freq_step();
  const int steps = int(p.spec.nyquist() / dr) * 2;
  for (int i = 0; i <= steps; ++i) {
    double r = i * dr / 2.0;
    if (r > 2.0)
      out.max_support_violation = std::max(out.max_support_violation, std::abs(p.phi_hat(r)));
    for (int k = 1; k <= p.k_max; ++k) {
      double lo = std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
      if (r < lo || r > hi)
        out.max_support_violation = std::max(out.max_support_violation, std::abs(p.psi_hat(k, r)));
    }
    if (i >= 1 && i <= steps - 1) {
      double d2 = std::abs(p.sum(r + dr / 2) - 2 * p.sum(r) + p.sum(r - dr / 2)) / (dr * dr / 4);
      for (int k = 0; k <= p.k_max; ++k) {
        double w2 = std::abs(p.window(k, r + dr / 2) - 2 * p.window(k, r) + p.window(k, r - dr / 2)) /
                    (dr * dr / 4);
        d2 = std::max(d2, w2);
      }
      out.smoothness_proxy = std::max(out.smoothness_proxy, d2);
    }
  }
  return out;
}

}  // namespace maxharm
