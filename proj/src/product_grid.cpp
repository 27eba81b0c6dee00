#include "maxharm/product_grid.hpp"

#include <cmath>

#include "maxharm/fft.hpp"

namespace maxharm {

namespace {

double per_factor_tail(const Eigen::ArrayXcd& v, int N, int l) {
  // largest over factors of the outer-10%-shell mass fraction in that factor
  double worst = 0.0;
  const int lo = N / 20, hi = N - 1 - N / 20;
  for (int f = 0; f < l; ++f) {
    std::int64_t stride = 1;
    for (int a = f + 1; a < l; ++a) stride *= N;
    KahanSum total, shell;
    for (std::int64_t idx = 0; idx < v.size(); ++idx) {
      double m = std::norm(v[idx]);
      total.add(m);
      int i = int((idx / stride) % N);
      if (i < lo || i > hi) shell.add(m);
    }
    double t = total.value();
    if (t > 0) worst = std::max(worst, shell.value() / t);
  }
  return worst;
}

}  // namespace

ProductGridFunction::ProductGridFunction(GridSpec factor_spec, int l, Domain domain,
                                         Eigen::ArrayXcd values)
    : spec_(factor_spec), l_(l), domain_(domain), values_(std::move(values)) {
  spec_.validate();
  require(spec_.n == 1, "ProductGridFunction: factors must be one-dimensional");
  require(l_ >= 1 && l_ <= 3, "ProductGridFunction: l must lie in 1..3");
  std::int64_t expect = 1;
  for (int a = 0; a < l_; ++a) expect *= spec_.N;
  require(values_.size() == expect, "ProductGridFunction: sample count mismatch");
  require(values_.allFinite(), "ProductGridFunction: samples must be finite");
  if (domain_ == Domain::Spatial) {
    tail_ = per_factor_tail(values_, spec_.N, l_);
    require(tail_ <= 1e-6, "ProductGridFunction: per-factor tail mass exceeds 1e-6");
  }
}

GridFunction ProductGridFunction::as_grid_function() const {
  require(l_ == 1, "as_grid_function: only valid for l = 1");
  return GridFunction(spec_, domain_, values_);
}

ProductGridFunction tensor_of(std::span<const GridFunction> factors) {
  require(!factors.empty() && factors.size() <= 3, "tensor_of: need 1..3 factors");
  const GridSpec& spec = factors[0].spec();
  require(spec.n == 1, "tensor_of: factors must be one-dimensional");
  for (const auto& f : factors) {
    require(f.spec() == spec, "tensor_of: factor grids must match");
    require(f.domain() == factors[0].domain(), "tensor_of: factor domains must match");
  }
  const int l = int(factors.size());
  std::int64_t total = 1;
  for (int a = 0; a < l; ++a) total *= spec.N;
  Eigen::ArrayXcd v(total);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx;
    cplx prod(1.0, 0.0);
    for (int a = l - 1; a >= 0; --a) {
      prod *= factors[size_t(a)].values()[rem % spec.N];
      rem /= spec.N;
    }
    v[idx] = prod;
  }
  return ProductGridFunction(spec, l, factors[0].domain(), std::move(v));
}

GridFunction diagonal_restrict(const ProductGridFunction& G) {
  require(G.domain() == Domain::Spatial, "diagonal_restrict: input must be spatial");
  const int N = G.factor_spec().N, l = G.l();
  std::int64_t stride = 0, mult = 1;
  for (int a = 0; a < l; ++a) {
    stride += mult;
    mult *= N;
  }
  Eigen::ArrayXcd v(N);
  for (int j = 0; j < N; ++j) v[j] = G.values()[std::int64_t(j) * stride];
  return GridFunction(G.factor_spec(), Domain::Spatial, std::move(v));
}

ProductGridFunction collapse_last(const ProductGridFunction& H) {
  require(H.domain() == Domain::Spatial, "collapse_last: input must be spatial");
  require(H.l() >= 2, "collapse_last: need at least two factors");
  const int N = H.factor_spec().N;
  std::int64_t out_size = 1;
  for (int a = 0; a < H.l() - 1; ++a) out_size *= N;
  Eigen::ArrayXcd v(out_size);
  for (std::int64_t idx = 0; idx < out_size; ++idx)
    v[idx] = H.values()[idx * N + (idx % N)];
  return ProductGridFunction(H.factor_spec(), H.l() - 1, Domain::Spatial, std::move(v));
}

double sobolev_norm(const ProductGridFunction& G, double s) {
  require(s >= 0, "sobolev_norm: s must be nonnegative");
  const GridSpec& spec = G.factor_spec();
  Eigen::ArrayXcd ghat =
      G.domain() == Domain::Spatial
          ? detail::forward_grid_transform(G.values(), spec.N, G.l(), spec.L)
          : G.values();
  KahanSum acc;
  for (std::int64_t idx = 0; idx < ghat.size(); ++idx) {
    std::int64_t rem = idx;
    double xi2 = 0.0;
    for (int a = 0; a < G.l(); ++a) {
      double xi = spec.freq(int(rem % spec.N));
      rem /= spec.N;
      xi2 += xi * xi;
    }
    acc.add(std::pow(1.0 + 4.0 * kPi * kPi * xi2, s) * std::norm(ghat[idx]));
  }
  return std::sqrt(acc.value() * std::pow(spec.freq_step(), G.l()));
}

double trace_ratio(const ProductGridFunction& G, double s) {
  require(s > 0, "trace_ratio: s must be positive");
  double num = sobolev_norm(diagonal_restrict(G), s);
  double den = sobolev_norm(G, s + (G.l() - 1) * 0.5);
  require(den > 0, "trace_ratio: zero denominator");
  return num / den;
}

}  // namespace maxharm
