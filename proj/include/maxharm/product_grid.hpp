#pragma once

#include <span>

#include "maxharm/grid.hpp"

namespace maxharm {

/// Samples over (R^n)^l product grids with identical one-dimensional factors
/// (n = 1, l <= 3; memory is N^l). Immutable.
class ProductGridFunction {
 public:
  ProductGridFunction(GridSpec factor_spec, int l, Domain domain, Eigen::ArrayXcd values);

  const GridSpec& factor_spec() const { return spec_; }
  int l() const { return l_; }
  Domain domain() const { return domain_; }
  const Eigen::ArrayXcd& values() const { return values_; }

  /// Largest per-factor outer-shell mass fraction.
  double tail_mass() const { return tail_; }

  /// View an l = 1 product function as a plain GridFunction.
  GridFunction as_grid_function() const;

 private:
  GridSpec spec_;
  int l_;
  Domain domain_;
  Eigen::ArrayXcd values_;
  double tail_ = 0.0;
};

/// Tensor product of one-dimensional factors (all on the same grid).
ProductGridFunction tensor_of(std::span<const GridFunction> factors);

/// G~(x) = G(x, ..., x), sample-exact.
GridFunction diagonal_restrict(const ProductGridFunction& G);

/// Identify the last two variables: H(x_1..x_k, x_k). Iterating l-1 times
/// reproduces diagonal_restrict.
ProductGridFunction collapse_last(const ProductGridFunction& H);

double sobolev_norm(const ProductGridFunction& G, double s);

/// ||G~||_{L^2_s} / ||G||_{L^2_{s+(l-1)n/2}} for s > 0.
double trace_ratio(const ProductGridFunction& G, double s);

}  // namespace maxharm
