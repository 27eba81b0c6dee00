#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>

#include "maxharm/util.hpp"

namespace maxharm {

/// Uniform periodic grid over the centered box [-L/2, L/2)^n.
struct GridSpec {
  int n = 1;      // dimension, 1 or 2
  double L = 32;  // box side
  int N = 512;    // points per axis, power of two

  GridSpec() = default;
  GridSpec(int n_, double L_, int N_) : n(n_), L(L_), N(N_) { validate(); }

  void validate() const {
    require(n == 1 || n == 2, "GridSpec: dimension must be 1 or 2");
    require(L > 0, "GridSpec: box side L must be positive");
    require(is_power_of_two(N), "GridSpec: N must be a power of two");
  }

  double h() const { return L / N; }
  double freq_step() const { return 1.0 / L; }
  double nyquist() const { return N / (2.0 * L); }
  std::int64_t size() const {
    std::int64_t s = 1;
    for (int a = 0; a < n; ++a) s *= N;
    return s;
  }
  double coord(int j) const { return -L / 2 + j * h(); }
  double freq(int i) const { return (i - N / 2) / L; }

  bool operator==(const GridSpec& o) const { return n == o.n && L == o.L && N == o.N; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

enum class Domain { Spatial, Frequency };

/// Complex samples on a GridSpec; the discrete surrogate for a rapidly
/// decaying function on R^n. Immutable after construction.
class GridFunction {
 public:
  GridFunction(GridSpec spec, Domain domain, Eigen::ArrayXcd values);

  const GridSpec& spec() const { return spec_; }
  Domain domain() const { return domain_; }
  const Eigen::ArrayXcd& values() const { return values_; }
  std::int64_t size() const { return values_.size(); }

  /// Fraction of the |f|^2 mass carried by points whose coordinate lies in
  /// the outer 10% shell of the box along any axis.
  double tail_mass() const;

  /// Coordinates of the flattened index (n components).
  std::array<double, 2> point(std::int64_t idx) const;
  std::array<double, 2> freq_point(std::int64_t idx) const;

 private:
  GridSpec spec_;
  Domain domain_;
  Eigen::ArrayXcd values_;
  mutable std::optional<double> tail_;
};

GridFunction fourier(const GridFunction& f);
GridFunction inverse_fourier(const GridFunction& g);

/// (sum |f(x_j)|^p h^n)^(1/p); p = infinity returns max |sample|.
double lp_norm(const GridFunction& f, double p);

/// Sobolev norm of order s >= 0 via the frequency-side Bessel weight.
double sobolev_norm(const GridFunction& f, double s);

enum class Profile { Gaussian, Bump, Modulated };

Profile profile_from_string(const std::string& s);
std::string to_string(Profile p);

/// g(2^{-e}(x - x0)) e^{2pi i <v,x>} where g is the base profile and
/// e = dilation_log2.
struct TestFunctionSpec {
  Profile profile = Profile::Gaussian;
  double dilation_log2 = 0.0;
  std::array<double, 2> x0{0.0, 0.0};
  std::array<double, 2> v{0.0, 0.0};
};

/// Base profile value at a point (radial except for the modulated family).
double profile_value(Profile p, const double* y, int n);

/// Sample a test function and verify that it fits the grid: spatial and
/// frequency outer-shell mass must both stay below 1e-6 (aliasing and
/// truncation guard).
GridFunction test_function(const GridSpec& spec, const TestFunctionSpec& tf);

/// Shell-mass diagnostic used by GridFunction::tail_mass and the frequency
/// guard of test_function.
double shell_mass_fraction(const Eigen::ArrayXcd& v, int N, int axes);

}  // namespace maxharm
