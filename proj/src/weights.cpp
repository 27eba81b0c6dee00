#include "maxharm/weights.hpp"

#include <cmath>

namespace maxharm {

Weight power_weight(double a, const GridSpec& spec) {
  require(std::abs(a) < 8.0 * spec.n, "power_weight: |a| exceeds the sanity cap");
  Eigen::ArrayXd w(spec.size());
  for (std::int64_t idx = 0; idx < w.size(); ++idx) {
    std::int64_t rem = idx;
    double r2 = 0.0;
    for (int ax = spec.n - 1; ax >= 0; --ax) {
      double d = wrap_dist(spec.coord(int(rem % spec.N)), spec.L);
      rem /= spec.N;
      r2 += d * d;
    }
    w[idx] = std::pow(std::max(std::sqrt(r2), spec.h() / 2.0), a);
  }
  Weight out{spec, std::move(w), "power a=" + std::to_string(a)};
  out.validate();
  return out;
}

double ap_constant(const Weight& w, double p, const CubeFamily& fam) {
  require(p >= 1.0, "ap_constant: p must be >= 1");
  require(w.spec == fam.spec, "ap_constant: grid mismatch");
  w.validate();

  if (p == 1.0) {
    GridFunction wf(w.spec, Domain::Spatial, w.w.cast<cplx>());
    MaximalField mw = hl_maximal(wf, 1.0, fam);
    double sup = 0.0;
    for (std::int64_t i = 0; i < w.w.size(); ++i) sup = std::max(sup, mw.values[i] / w.w[i]);
    return sup;
  }

  auto avg_w = detail::cube_sums(fam, w.w);
  auto avg_dual = detail::cube_sums(fam, w.w.pow(-1.0 / (p - 1.0)));
  double sup = 0.0;
  for (size_t s = 0; s < fam.scales.size(); ++s) {
    double cells = std::pow(double(fam.scales[s].side_cells), fam.spec.n);
    for (std::int64_t q = 0; q < avg_w[s].size(); ++q) {
      double prod = (avg_w[s][q] / cells) * std::pow(avg_dual[s][q] / cells, p - 1.0);
      sup = std::max(sup, prod);
    }
  }
  return sup;
}

void WeightTuple::validate() const {
  require(!weights.empty(), "WeightTuple: empty tuple");
  require(weights.size() == exponents.size(), "WeightTuple: weight/exponent count mismatch");
  for (const auto& w : weights) {
    w.validate();
    require(w.spec == weights[0].spec, "WeightTuple: grids must match");
  }
  for (double pj : exponents)
    require(pj > 1.0 && std::isfinite(pj), "WeightTuple: exponents must lie in (1, inf)");
}

Weight product_weight(const WeightTuple& t) {
  t.validate();
  double p = t.p();
  Eigen::ArrayXd v = Eigen::ArrayXd::Ones(t.weights[0].w.size());
  for (size_t j = 0; j < t.weights.size(); ++j)
    v *= t.weights[j].w.pow(p / t.exponents[j]);
  Weight out{t.weights[0].spec, std::move(v), "product"};
  out.validate();
  return out;
}

double multilinear_ap_constant(const WeightTuple& t, const CubeFamily& fam) {
  t.validate();
  require(t.weights[0].spec == fam.spec, "multilinear_ap_constant: grid mismatch");
  const double p = t.p();

  Weight v = product_weight(t);
  auto avg_v = detail::cube_sums(fam, v.w);
  std::vector<detail::CubeTables> avg_dual;
  avg_dual.reserve(t.weights.size());
  for (size_t j = 0; j < t.weights.size(); ++j) {
    double pj = t.exponents[j];
    double pj_conj = pj / (pj - 1.0);
    avg_dual.push_back(detail::cube_sums(fam, t.weights[j].w.pow(1.0 - pj_conj)));
  }

  double sup = 0.0;
  for (size_t s = 0; s < fam.scales.size(); ++s) {
    double cells = std::pow(double(fam.scales[s].side_cells), fam.spec.n);
    for (std::int64_t q = 0; q < avg_v[s].size(); ++q) {
      double bracket = std::pow(avg_v[s][q] / cells, 1.0 / p);
      for (size_t j = 0; j < t.weights.size(); ++j) {
        // dual averages enter with the conjugate exponent 1/p_j', which is
        // what makes the bracket invariant under w_j -> lambda w_j
        double pj = t.exponents[j];
        bracket *= std::pow(avg_dual[j][s][q] / cells, (pj - 1.0) / pj);
      }
      sup = std::max(sup, bracket);
    }
  }
  return sup;
}

double lp_norm(const GridFunction& f, double p, const Weight& w) {
  require(p > 0 || std::isinf(p), "lp_norm: p must be positive or infinity");
  require(f.spec() == w.spec, "lp_norm: weight grid mismatch");
  require(f.domain() == Domain::Spatial, "lp_norm: weighted norms act on spatial functions");
  if (std::isinf(p)) return lp_norm(f, p);
  KahanSum s;
  for (std::int64_t i = 0; i < f.size(); ++i)
    s.add(std::pow(std::abs(f.values()[i]), p) * w.w[i]);
  double cell = std::pow(f.spec().h(), f.spec().n);
  return std::pow(s.value() * cell, 1.0 / p);
}

}  // namespace maxharm
