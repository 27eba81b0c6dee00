#pragma once

#include <Eigen/Dense>

#include "maxharm/util.hpp"

namespace maxharm::detail {

/// In-place radix-2 FFT of a contiguous line of length n (power of two).
/// forward uses the e^{-2pi i jk/n} kernel; the inverse is the plain
/// unnormalized conjugate sum (no 1/n factor).
void fft_line(cplx* data, int n, bool forward);

/// Apply fft_line along every axis of an n^axes hypercube stored row-major
/// (last axis fastest).
void fft_all_axes(Eigen::ArrayXcd& v, int n, int axes, bool forward);

/// Grid transform between centered spatial samples and centered frequency
/// samples on a periodic box of side L per axis:
///   ghat[m] = h^axes * sum_j g[j] e^{-2pi i <x_j, xi_m>},  m = -n/2..n/2-1.
Eigen::ArrayXcd forward_grid_transform(const Eigen::ArrayXcd& v, int n, int axes, double L);

/// Inverse of forward_grid_transform:
///   g[j] = (1/L)^axes * sum_m ghat[m] e^{+2pi i <x_j, xi_m>}.
Eigen::ArrayXcd inverse_grid_transform(const Eigen::ArrayXcd& v, int n, int axes, double L);

}  // namespace maxharm::detail
