#include "maxharm/grid.hpp"

#include <cmath>

#include "maxharm/fft.hpp"

namespace maxharm {

GridFunction::GridFunction(GridSpec spec, Domain domain, Eigen::ArrayXcd values)
    : spec_(spec), domain_(domain), values_(std::move(values)) {
  spec_.validate();
  require(values_.size() == spec_.size(), "GridFunction: sample count does not match grid");
  require(values_.allFinite(), "GridFunction: samples must be finite");
}

double shell_mass_fraction(const Eigen::ArrayXcd& v, int N, int axes) {
  KahanSum total, shell;
  const int lo = N / 20;        // |index - N/2| >= 0.45 N  <=>  outer 10% of the box
  const int hi = N - 1 - N / 20;
  for (std::int64_t idx = 0; idx < v.size(); ++idx) {
    double m = std::norm(v[idx]);
    total.add(m);
    std::int64_t rem = idx;
    bool outer = false;
    for (int a = 0; a < axes; ++a) {
      int i = int(rem % N);
      rem /= N;
      if (i < lo || i > hi) outer = true;
    }
    if (outer) shell.add(m);
  }
  double t = total.value();
  return t > 0 ? shell.value() / t : 0.0;
}

double GridFunction::tail_mass() const {
  if (!tail_) tail_ = shell_mass_fraction(values_, spec_.N, spec_.n);
  return *tail_;
}

std::array<double, 2> GridFunction::point(std::int64_t idx) const {
  std::array<double, 2> x{0.0, 0.0};
  std::int64_t rem = idx;
  for (int a = spec_.n - 1; a >= 0; --a) {
    x[size_t(a)] = spec_.coord(int(rem % spec_.N));
    rem /= spec_.N;
  }
  return x;
}

std::array<double, 2> GridFunction::freq_point(std::int64_t idx) const {
  std::array<double, 2> xi{0.0, 0.0};
  std::int64_t rem = idx;
  for (int a = spec_.n - 1; a >= 0; --a) {
    xi[size_t(a)] = spec_.freq(int(rem % spec_.N));
    rem /= spec_.N;
  }
  return xi;
}

GridFunction fourier(const GridFunction& f) {
  require(f.domain() == Domain::Spatial, "fourier: input must be spatial-domain");
  return GridFunction(f.spec(), Domain::Frequency,
                      detail::forward_grid_transform(f.values(), f.spec().N, f.spec().n, f.spec().L));
}

GridFunction inverse_fourier(const GridFunction& g) {
  require(g.domain() == Domain::Frequency, "inverse_fourier: input must be frequency-domain");
  return GridFunction(g.spec(), Domain::Spatial,
                      detail::inverse_grid_transform(g.values(), g.spec().N, g.spec().n, g.spec().L));
}

double lp_norm(const GridFunction& f, double p) {
  require(p > 0 || std::isinf(p), "lp_norm: p must be positive or infinity");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::int64_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.values()[i]));
    return m;
  }
  KahanSum s;
  for (std::int64_t i = 0; i < f.size(); ++i) s.add(std::pow(std::abs(f.values()[i]), p));
  double step = f.domain() == Domain::Spatial ? f.spec().h() : f.spec().freq_step();
  return std::pow(s.value() * std::pow(step, f.spec().n), 1.0 / p);
}

double sobolev_norm(const GridFunction& f, double s) {
  require(s >= 0, "sobolev_norm: s must be nonnegative");
  GridFunction g = f.domain() == Domain::Spatial ? fourier(f) : f;
  KahanSum acc;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto xi = g.freq_point(i);
    double xi2 = xi[0] * xi[0] + xi[1] * xi[1];
    double w = std::pow(1.0 + 4.0 * kPi * kPi * xi2, s);
    acc.add(w * std::norm(g.values()[i]));
  }
  double cell = std::pow(g.spec().freq_step(), g.spec().n);
  return std::sqrt(acc.value() * cell);
}

Profile profile_from_string(const std::string& s) {
  if (s == "gaussian") return Profile::Gaussian;
  if (s == "bump") return Profile::Bump;
  if (s == "modulated") return Profile::Modulated;
  fail("unknown profile '" + s + "' (expected gaussian|bump|modulated)");
}

std::string to_string(Profile p) {
  switch (p) {
    case Profile::Gaussian: return "gaussian";
    case Profile::Bump: return "bump";
    case Profile::Modulated: return "modulated";
  }
  return "?";
}

double profile_value(Profile p, const double* y, int n) {
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += y[a] * y[a];
  switch (p) {
    case Profile::Gaussian:
      return std::exp(-kPi * r2);
    case Profile::Bump: {
      const double a = 2.0;  // support radius
      double t2 = r2 / (a * a);
      if (t2 >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - t2));
    }
    case Profile::Modulated:
      return std::cos(kTwoPi * y[0]) * std::exp(-kPi * r2);
  }
  return 0.0;
}

GridFunction test_function(const GridSpec& spec, const TestFunctionSpec& tf) {
  const double scale = std::pow(2.0, -tf.dilation_log2);
  for (int a = 0; a < spec.n; ++a)
    require(std::abs(tf.v[size_t(a)]) < spec.nyquist(),
            "test_function: modulation exceeds the grid Nyquist band");

  Eigen::ArrayXcd v(spec.size());
  const int N = spec.N;
  for (std::int64_t idx = 0; idx < v.size(); ++idx) {
    double x[2] = {0, 0}, y[2] = {0, 0};
    std::int64_t rem = idx;
    for (int a = spec.n - 1; a >= 0; --a) {
      x[a] = spec.coord(int(rem % N));
      rem /= N;
    }
    double phase = 0.0;
    for (int a = 0; a < spec.n; ++a) {
      y[a] = scale * (x[a] - tf.x0[size_t(a)]);
      phase += tf.v[size_t(a)] * x[a];
    }
    v[idx] = profile_value(tf.profile, y, spec.n) * std::polar(1.0, kTwoPi * phase);
  }

  GridFunction f(spec, Domain::Spatial, std::move(v));
  require(lp_norm(f, 2.0) > 0, "test_function: degenerate (zero) sample set");
  require(f.tail_mass() <= 1e-6,
          "test_function: spatial tail mass exceeds 1e-6 (profile does not fit the box)");
  double freq_shell = shell_mass_fraction(fourier(f).values(), spec.N, spec.n);
  require(freq_shell <= 1e-6,
          "test_function: frequency shell mass exceeds 1e-6 (aliasing guard)");
  return f;
}

}  // namespace maxharm
