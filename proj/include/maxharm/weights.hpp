#pragma once

#include "maxharm/maximal.hpp"

namespace maxharm {

/// Strictly positive density on a grid.
struct Weight {
  GridSpec spec;
  Eigen::ArrayXd w;
  std::string descriptor;

  void validate() const {
    require(w.size() == spec.size(), "Weight: sample count mismatch");
    require(w.allFinite() && (w > 0).all(), "Weight: must be strictly positive and finite");
  }
};

/// max(|x|_wrap, h/2)^a. The clamp at h/2 keeps dual powers integrable on the
/// grid. Sanity cap |a| < 8n.
Weight power_weight(double a, const GridSpec& spec);

/// A_p characteristic over the family: sup_Q avg_Q(w) avg_Q(w^{-1/(p-1)})^{p-1}
/// for p > 1; for p = 1, sup_x M w(x) / w(x).
double ap_constant(const Weight& w, double p, const CubeFamily& fam);

/// l weights with exponent vector; 1/p = sum 1/p_j.
struct WeightTuple {
  std::vector<Weight> weights;
  std::vector<double> exponents;  // p_j in (1, inf)

  int l() const { return int(weights.size()); }
  double p() const {
    double inv = 0.0;
    for (double pj : exponents) inv += 1.0 / pj;
    return 1.0 / inv;
  }
  void validate() const;
};

/// v_w(x) = prod_j w_j(x)^{p/p_j}.
Weight product_weight(const WeightTuple& t);

/// sup_Q (avg_Q v_w)^{1/p} prod_j (avg_Q w_j^{1-p_j'})^{1/p_j'}.
double multilinear_ap_constant(const WeightTuple& t, const CubeFamily& fam);

/// Weighted L^p norm (sum |f|^p w h^n)^{1/p}; p = infinity ignores the weight.
double lp_norm(const GridFunction& f, double p, const Weight& w);

}  // namespace maxharm
