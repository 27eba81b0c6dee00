#pragma once

// Independent reference implementations used as test oracles. Everything here
// is deliberately naive: direct sums, exhaustive enumeration, dense searches.
// Nothing in this header may call the fast paths it is used to check.

#include <algorithm>
#include <complex>
#include <vector>

#include "maxharm/grid.hpp"
#include "maxharm/maximal.hpp"
#include "maxharm/symbol.hpp"

namespace oracles {

using maxharm::cplx;
using maxharm::GridFunction;
using maxharm::GridSpec;

// Direct O(N^2) transform: fhat(xi_m) = h Sum_j f(x_j) e^{-2pi i x_j xi_m}.
inline std::vector<cplx> dft_direct_1d(const GridSpec& spec, const Eigen::ArrayXcd& f) {
  std::vector<cplx> out(static_cast<size_t>(spec.N));
  for (int mi = 0; mi < spec.N; ++mi) {
    cplx acc(0, 0);
    double xi = spec.freq(mi);
    for (int j = 0; j < spec.N; ++j)
      acc += f[j] * std::polar(1.0, -maxharm::kTwoPi * spec.coord(j) * xi);
    out[static_cast<size_t>(mi)] = acc * spec.h();
  }
  return out;
}

// High-resolution quadrature of int g(x) e^{-2pi i x xi} dx over [-R, R].
template <typename G>
cplx fourier_integral_1d(G&& g, double xi, double R = 24.0, int steps = 1 << 16) {
  cplx acc(0, 0);
  double h = 2 * R / steps;
  for (int j = 0; j < steps; ++j) {
    double x = -R + (j + 0.5) * h;
    acc += g(x) * std::polar(1.0, -maxharm::kTwoPi * x * xi);
  }
  return acc * h;
}

// T_sigma f at one point by the defining double sum (linear case).
inline cplx apply_linear_at(const maxharm::Symbol& sigma, const GridFunction& fhat, double x) {
  const GridSpec& spec = fhat.spec();
  cplx acc(0, 0);
  for (int mi = 0; mi < spec.N; ++mi) {
    double xi = spec.freq(mi);
    double xv[1] = {x}, xiv[1] = {xi};
    acc += sigma.eval(std::span<const double>(xv, 1), std::span<const double>(xiv, 1)) *
           fhat.values()[mi] * std::polar(1.0, maxharm::kTwoPi * x * xi);
  }
  return acc / spec.L;
}

// Bilinear T_sigma(f1,f2) at one point by the defining triple sum (n = 1).
inline cplx apply_bilinear_at(const maxharm::Symbol& sigma, const GridFunction& f1hat,
                              const GridFunction& f2hat, double x) {
  const GridSpec& spec = f1hat.spec();
  cplx acc(0, 0);
  for (int m1 = 0; m1 < spec.N; ++m1) {
    double xi1 = spec.freq(m1);
    if (std::abs(f1hat.values()[m1]) == 0.0) continue;
    for (int m2 = 0; m2 < spec.N; ++m2) {
      double xi2 = spec.freq(m2);
      double xv[1] = {x}, xiv[2] = {xi1, xi2};
      acc += sigma.eval(std::span<const double>(xv, 1), std::span<const double>(xiv, 2)) *
             f1hat.values()[m1] * f2hat.values()[m2] *
             std::polar(1.0, maxharm::kTwoPi * x * (xi1 + xi2));
    }
  }
  return acc / (spec.L * spec.L);
}

// All cubes of a family, as (side_cells, anchor) pairs. n = 1.
struct Cube1 {
  int w;
  int a;
};

inline std::vector<Cube1> all_cubes_1d(const maxharm::CubeFamily& fam) {
  std::vector<Cube1> cubes;
  for (const auto& s : fam.scales)
    for (int a = 0; a < fam.spec.N; a += s.stride_cells) cubes.push_back({s.side_cells, a});
  return cubes;
}

inline bool cube_contains_1d(const Cube1& c, int j, int N) {
  int rel = ((j - c.a) % N + N) % N;
  return rel < c.w;
}

inline std::vector<cplx> cube_samples_1d(const Eigen::ArrayXcd& v, const Cube1& c, int N) {
  std::vector<cplx> out(static_cast<size_t>(c.w));
  for (int i = 0; i < c.w; ++i) out[static_cast<size_t>(i)] = v[(c.a + i) % N];
  return out;
}

// Naive M_r: for each point, loop over every cube containing it.
inline Eigen::ArrayXd hl_naive_1d(const GridFunction& f, double r,
                                  const maxharm::CubeFamily& fam) {
  auto cubes = all_cubes_1d(fam);
  const int N = f.spec().N;
  Eigen::ArrayXd out(N);
  for (int j = 0; j < N; ++j) {
    double best = 0.0;
    for (const auto& c : cubes) {
      if (!cube_contains_1d(c, j, N)) continue;
      double s = 0.0;
      for (int i = 0; i < c.w; ++i) s += std::pow(std::abs(f.values()[(c.a + i) % N]), r);
      best = std::max(best, s / c.w);
    }
    out[j] = std::pow(best, 1.0 / r);
  }
  return out;
}

inline Eigen::ArrayXd multisublinear_naive_1d(std::span<const GridFunction> fs, double r,
                                              const maxharm::CubeFamily& fam) {
  auto cubes = all_cubes_1d(fam);
  const int N = fs[0].spec().N;
  Eigen::ArrayXd out(N);
  for (int j = 0; j < N; ++j) {
    double best = 0.0;
    for (const auto& c : cubes) {
      if (!cube_contains_1d(c, j, N)) continue;
      double prod = 1.0;
      for (const auto& f : fs) {
        double s = 0.0;
        for (int i = 0; i < c.w; ++i) s += std::pow(std::abs(f.values()[(c.a + i) % N]), r);
        prod *= s / c.w;
      }
      best = std::max(best, prod);
    }
    out[j] = std::pow(best, 1.0 / r);
  }
  return out;
}

// Dense complex grid search for inf_c (avg |f-c|^t)^{1/t}: multi-level zoom
// around the best grid point.
inline double best_constant_grid(const std::vector<cplx>& samples, double t) {
  double re_lo = samples[0].real(), re_hi = re_lo, im_lo = samples[0].imag(), im_hi = im_lo;
  for (const cplx& v : samples) {
    re_lo = std::min(re_lo, v.real());
    re_hi = std::max(re_hi, v.real());
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  auto obj = [&](cplx c) {
    double acc = 0.0;
    for (const cplx& v : samples) acc += std::pow(std::abs(v - c), t);
    return acc / double(samples.size());
  };
  cplx center((re_lo + re_hi) / 2, (im_lo + im_hi) / 2);
  double span = std::max({re_hi - re_lo, im_hi - im_lo, 1e-30});
  double best = obj(cplx(0, 0));
  cplx best_c(0, 0);
  for (int level = 0; level < 10; ++level) {
    const int G = 21;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        cplx c = center + cplx(span * (i - G / 2) / G, span * (j - G / 2) / G);
        double o = obj(c);
        if (o < best) {
          best = o;
          best_c = c;
        }
      }
    center = best_c;
    span *= 0.3;
  }
  return std::pow(best, 1.0 / t);
}

// Naive sharp maximal fields sharing the library's per-cube minimizer; checks
// the enumeration and prefix-sum machinery against direct loops.
inline Eigen::ArrayXd sharp_homog_naive_1d(const GridFunction& f,
                                           const maxharm::CubeFamily& fam) {
  auto cubes = all_cubes_1d(fam);
  const int N = f.spec().N;
  Eigen::ArrayXd out(N);
  for (int j = 0; j < N; ++j) {
    double best = 0.0;
    for (const auto& c : cubes) {
      if (!cube_contains_1d(c, j, N)) continue;
      auto samples = cube_samples_1d(f.values(), c, N);
      best = std::max(best, maxharm::best_constant(samples, 1.0).value);
    }
    out[j] = best;
  }
  return out;
}

inline Eigen::ArrayXd sharp_inhomog_naive_1d(const GridFunction& f, double r,
                                             const maxharm::CubeFamily& fam) {
  auto cubes = all_cubes_1d(fam);
  const int N = f.spec().N;
  const double h = f.spec().h();
  Eigen::ArrayXd out(N);
  for (int j = 0; j < N; ++j) {
    double best = 0.0;
    for (const auto& c : cubes) {
      if (!cube_contains_1d(c, j, N)) continue;
      if (c.w * h >= 1.0) {
        double s = 0.0;
        for (int i = 0; i < c.w; ++i) s += std::pow(std::abs(f.values()[(c.a + i) % N]), r);
        best = std::max(best, std::pow(s / c.w, 1.0 / r));
      } else {
        auto samples = cube_samples_1d(f.values(), c, N);
        best = std::max(best, maxharm::best_constant(samples, r).value);
      }
    }
    out[j] = best;
  }
  return out;
}

// Seeded band-limited random function: random spectrum below half-Nyquist.
inline GridFunction random_band_limited(const GridSpec& spec, std::uint64_t seed) {
  maxharm::SplitMix64 rng(seed);
  Eigen::ArrayXcd ghat = Eigen::ArrayXcd::Zero(spec.size());
  for (std::int64_t i = 0; i < ghat.size(); ++i) {
    std::int64_t rem = i;
    bool in_band = true;
    for (int a = 0; a < spec.n; ++a) {
      double xi = spec.freq(int(rem % spec.N));
      rem /= spec.N;
      if (std::abs(xi) > spec.nyquist() / 2) in_band = false;
    }
    if (in_band)
      ghat[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  return inverse_fourier(GridFunction(spec, maxharm::Domain::Frequency, ghat));
}

}  // namespace oracles
