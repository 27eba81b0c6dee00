#pragma once

#include <span>

#include "maxharm/symbol.hpp"

namespace maxharm {

/// T_sigma f(x) = sum_xi sigma(x,xi) fhat(xi) e^{2pi i <x,xi>} (1/L)^n on the
/// grid. Exact (up to rounding) for the modulation-term symbol shape; agrees
/// with the plain multiplier path when sigma is x-independent.
GridFunction apply_linear(const Symbol& sigma, const GridFunction& f);

/// Multilinear frequency quadrature
///   T_sigma(f_1..f_l)(x) = sum_{xi_1..xi_l} sigma(x,vec xi) prod fhat_j(xi_j)
///                          e^{2pi i <x, sum xi_j>} (1/L)^{nl},
/// restricted to the numerical support of each fhat_j (1e-14 of its peak).
GridFunction apply_multilinear(const Symbol& sigma, std::span<const GridFunction> fs);

/// K_k(y, u) = sum_xi sigma_k(y,xi) e^{2pi i <u,xi>} (1/L)^{nl} over the
/// (n*l)-dimensional u lattice, at a frozen base point y.
struct KernelSlice {
  GridSpec spec;
  int n = 1;
  int l = 1;
  int k = 0;  // piece index
  Eigen::VectorXd y;
  Symbol piece;
  Eigen::ArrayXcd values;
};

KernelSlice kernel_of_piece(const Symbol& piece, const GridSpec& spec, const Eigen::VectorXd& y);

enum class KernelVariant { Plain, GradY, GradU };

/// || prod_j (1 + 2^{k rho} |u_j|)^{Nw} K ||_{L^{r'}} with wraparound |u_j|;
/// r in [1,2] so r' in [2,inf]. GradY uses central differences across
/// neighboring base points; GradU multiplies by 2 pi i xi on the frequency
/// side before the inverse transform.
double kernel_weighted_norm(const KernelSlice& slice, double Nw, double r, double rho,
                            KernelVariant variant);

}  // namespace maxharm
