#include "maxharm/operators.hpp"

#include <cmath>
#include <vector>

#include "maxharm/fft.hpp"
#include "maxharm/parallel.hpp"

namespace maxharm {

namespace {

Eigen::ArrayXcd modulation_table(const GridSpec& spec, const std::array<double, 2>& v) {
  Eigen::ArrayXcd e(spec.size());
  for (std::int64_t idx = 0; idx < e.size(); ++idx) {
    std::int64_t rem = idx;
    double phase = 0.0;
    for (int a = spec.n - 1; a >= 0; --a) {
      phase += v[size_t(a)] * spec.coord(int(rem % spec.N));
      rem /= spec.N;
    }
    e[idx] = std::polar(1.0, kTwoPi * phase);
  }
  return e;
}

void decode_freq(const GridSpec& spec, std::int64_t idx, int axes, double* xi) {
  std::int64_t rem = idx;
  for (int a = axes - 1; a >= 0; --a) {
    xi[a] = spec.freq(int(rem % spec.N));
    rem /= spec.N;
  }
}

}  // namespace

GridFunction apply_linear(const Symbol& sigma, const GridFunction& f) {
  const auto& sp = sigma.params();
  require(sp.l == 1, "apply_linear: symbol linearity must be 1");
  require(sp.n == f.spec().n, "apply_linear: grid dimension mismatch");
  require(f.domain() == Domain::Spatial, "apply_linear: input must be spatial");

  const GridSpec& spec = f.spec();
  GridFunction fhat = fourier(f);

  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(spec.size());
  Eigen::ArrayXcd mult(spec.size());
  for (const auto& term : sigma.terms()) {
    for (std::int64_t idx = 0; idx < mult.size(); ++idx) {
      double xi[2];
      decode_freq(spec, idx, spec.n, xi);
      mult[idx] = term.g(std::span<const double>(xi, size_t(spec.n))) * fhat.values()[idx];
    }
    Eigen::ArrayXcd piece = detail::inverse_grid_transform(mult, spec.N, spec.n, spec.L);
    if (term.v[0] != 0.0 || term.v[1] != 0.0)
      out += modulation_table(spec, term.v) * piece;
    else
      out += piece;
  }
  return GridFunction(spec, Domain::Spatial, std::move(out));
}

GridFunction apply_multilinear(const Symbol& sigma, std::span<const GridFunction> fs) {
  const auto& sp = sigma.params();
  require(sp.l >= 2, "apply_multilinear: use apply_linear for l = 1");
  require(sp.l <= 3, "apply_multilinear: l > 3 not supported");
  require(int(fs.size()) == sp.l, "apply_multilinear: argument count must equal l");
  const GridSpec& spec = fs[0].spec();
  require(sp.n == spec.n, "apply_multilinear: grid dimension mismatch");
  for (const auto& f : fs) {
    require(f.spec() == spec, "apply_multilinear: all inputs must share one grid");
    require(f.domain() == Domain::Spatial, "apply_multilinear: inputs must be spatial");
  }

  const int l = sp.l, n = spec.n, N = spec.N;
  const std::int64_t bins = spec.size();

  std::vector<Eigen::ArrayXcd> fhat;
  std::vector<std::vector<std::int64_t>> support(static_cast<size_t>(l));
  std::vector<std::vector<char>> in_support(static_cast<size_t>(l));
  fhat.reserve(size_t(l));
  for (int j = 0; j < l; ++j) {
    fhat.push_back(fourier(fs[size_t(j)]).values());
    double peak = 0.0;
    for (std::int64_t i = 0; i < bins; ++i) peak = std::max(peak, std::abs(fhat[size_t(j)][i]));
    double thresh = 1e-14 * peak;
    in_support[size_t(j)].assign(size_t(bins), 0);
    for (std::int64_t i = 0; i < bins; ++i) {
      if (std::abs(fhat[size_t(j)][i]) >= thresh && peak > 0.0) {
        support[size_t(j)].push_back(i);
        in_support[size_t(j)][size_t(i)] = 1;
      }
    }
  }

  // per-axis centered-index helpers on flattened lattice indices
  auto axis_indices = [&](std::int64_t idx, int* m) {
    std::int64_t rem = idx;
    for (int a = n - 1; a >= 0; --a) {
      m[a] = int(rem % N);
      rem /= N;
    }
  };

  Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(bins);
  const double measure_rest = std::pow(1.0 / spec.L, n * (l - 1));

  for (const auto& term : sigma.terms()) {
    Eigen::ArrayXcd binned(bins);
    parallel_for(bins, [&](std::int64_t mo) {
      int m_out[2], m1[2], m2[2], mlast[2];
      axis_indices(mo, m_out);
      cplx acc(0.0, 0.0);
      double xi[8];
      if (l == 2) {
        for (std::int64_t i1 : support[0]) {
          axis_indices(i1, m1);
          std::int64_t ilast = 0;
          for (int a = 0; a < n; ++a) {
            int d = m_out[a] - m1[a] + N / 2;     // storage index of m_out - m_1
            mlast[a] = ((d % N) + N) % N;         // wrap per axis
            ilast = ilast * N + mlast[a];
          }
          if (!in_support[1][size_t(ilast)]) continue;
          for (int a = 0; a < n; ++a) {
            xi[a] = spec.freq(m1[a]);
            xi[n + a] = spec.freq(mlast[a]);
          }
          acc += term.g(std::span<const double>(xi, size_t(2 * n))) * fhat[0][i1] *
                 fhat[1][ilast];
        }
      } else {
        for (std::int64_t i1 : support[0]) {
          axis_indices(i1, m1);
          for (std::int64_t i2 : support[1]) {
            axis_indices(i2, m2);
            std::int64_t ilast = 0;
            for (int a = 0; a < n; ++a) {
              int d = m_out[a] - m1[a] - m2[a];  // storage index of m_out - m_1 - m_2
              mlast[a] = ((d % N) + N) % N;
              ilast = ilast * N + mlast[a];
            }
            if (!in_support[2][size_t(ilast)]) continue;
            for (int a = 0; a < n; ++a) {
              xi[a] = spec.freq(m1[a]);
              xi[n + a] = spec.freq(m2[a]);
              xi[2 * n + a] = spec.freq(mlast[a]);
            }
            acc += term.g(std::span<const double>(xi, size_t(3 * n))) * fhat[0][i1] *
                   fhat[1][i2] * fhat[2][ilast];
          }
        }
      }
      binned[mo] = acc;
    });
    Eigen::ArrayXcd piece = detail::inverse_grid_transform(binned, N, n, spec.L) * measure_rest;
    if (term.v[0] != 0.0 || term.v[1] != 0.0)
      out += modulation_table(spec, term.v) * piece;
    else
      out += piece;
  }
  return GridFunction(spec, Domain::Spatial, std::move(out));
}

namespace {

// Frequency samples of the piece at frozen y, optionally multiplied by
// 2 pi i xi_axis (for the u-gradient).
Eigen::ArrayXcd piece_frequency_samples(const Symbol& piece, const GridSpec& spec,
                                        const Eigen::VectorXd& y, int grad_axis) {
  const int n = piece.params().n, l = piece.params().l;
  const int axes = n * l;
  std::int64_t total = 1;
  for (int a = 0; a < axes; ++a) total *= spec.N;
  Eigen::ArrayXcd F(total);
  double x[2] = {0, 0};
  for (int a = 0; a < n; ++a) x[a] = y[a];
  parallel_for(total, [&](std::int64_t idx) {
    double xi[8];
    decode_freq(spec, idx, axes, xi);
    cplx val = piece.eval(std::span<const double>(x, size_t(n)),
                          std::span<const double>(xi, size_t(axes)));
    if (grad_axis >= 0) val *= cplx(0.0, kTwoPi * xi[grad_axis]);
    F[idx] = val;
  });
  return F;
}

}  // namespace

KernelSlice kernel_of_piece(const Symbol& piece, const GridSpec& spec, const Eigen::VectorXd& y) {
  require(piece.piece_index().has_value(),
          "kernel_of_piece: symbol is not a Littlewood-Paley piece");
  const int n = piece.params().n, l = piece.params().l;
  require(y.size() == n, "kernel_of_piece: base point dimension mismatch");
  const int k = *piece.piece_index();

  // Support probe: the piece must vanish outside its annulus.
  {
    double x[2] = {0, 0};
    for (int a = 0; a < n; ++a) x[a] = y[a];
    double probes[2] = {std::ldexp(1.0, k + 1) * 1.05, k >= 1 ? std::ldexp(1.0, k - 1) / 1.05 : -1.0};
    for (double r : probes) {
      if (r < 0 || r > spec.nyquist() * std::sqrt(double(n * l))) continue;
      double xi[8] = {0, 0, 0, 0, 0, 0, 0, 0};
      xi[0] = r;
      cplx val = piece.eval(std::span<const double>(x, size_t(n)),
                            std::span<const double>(xi, size_t(n * l)));
      require(std::abs(val) <= 1e-12, "kernel_of_piece: piece support violated");
    }
  }

  KernelSlice slice{spec, n, l, k, y, piece, {}};
  Eigen::ArrayXcd F = piece_frequency_samples(piece, spec, y, -1);
  slice.values = detail::inverse_grid_transform(F, spec.N, n * l, spec.L);
  return slice;
}

double kernel_weighted_norm(const KernelSlice& slice, double Nw, double r, double rho,
                            KernelVariant variant) {
  require(Nw >= 0.0, "kernel_weighted_norm: decay order must be >= 0");
  require(r >= 1.0 && r <= 2.0, "kernel_weighted_norm: r must lie in [1,2]");
  const GridSpec& spec = slice.spec;
  const int n = slice.n, l = slice.l, axes = n * l;
  const double scale = std::pow(2.0, slice.k * rho);

  Eigen::ArrayXd field(slice.values.size());
  if (variant == KernelVariant::Plain) {
    for (std::int64_t i = 0; i < field.size(); ++i) field[i] = std::abs(slice.values[i]);
  } else if (variant == KernelVariant::GradY) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(slice.values.size());
    for (int a = 0; a < n; ++a) {
      Eigen::VectorXd yp = slice.y, ym = slice.y;
      yp[a] += spec.h();
      ym[a] -= spec.h();
      Eigen::ArrayXcd Fp = piece_frequency_samples(slice.piece, spec, yp, -1);
      Eigen::ArrayXcd Fm = piece_frequency_samples(slice.piece, spec, ym, -1);
      Eigen::ArrayXcd Kp = detail::inverse_grid_transform(Fp, spec.N, axes, spec.L);
      Eigen::ArrayXcd Km = detail::inverse_grid_transform(Fm, spec.N, axes, spec.L);
      acc += ((Kp - Km) / (2.0 * spec.h())).abs2();
    }
    field = acc.sqrt();
  } else {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(slice.values.size());
    for (int a = 0; a < axes; ++a) {
      Eigen::ArrayXcd F = piece_frequency_samples(slice.piece, spec, slice.y, a);
      Eigen::ArrayXcd D = detail::inverse_grid_transform(F, spec.N, axes, spec.L);
      acc += D.abs2();
    }
    field = acc.sqrt();
  }

  // weight: product over factors of (1 + 2^{k rho} |u_j|)^Nw, wraparound metric
  const int N = spec.N;
  auto weight_at = [&](std::int64_t idx) {
    std::int64_t rem = idx;
    double coords[8];
    for (int a = axes - 1; a >= 0; --a) {
      coords[a] = spec.coord(int(rem % N));
      rem /= N;
    }
    double w = 1.0;
    for (int j = 0; j < l; ++j) {
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        double d = wrap_dist(coords[j * n + a], spec.L);
        r2 += d * d;
      }
      w *= std::pow(1.0 + scale * std::sqrt(r2), Nw);
    }
    return w;
  };

  if (r == 1.0) {  // r' = infinity
    double sup = 0.0;
    for (std::int64_t i = 0; i < field.size(); ++i)
      sup = std::max(sup, weight_at(i) * field[i]);
    return sup;
  }
  double rp = r / (r - 1.0);
  KahanSum s;
  for (std::int64_t i = 0; i < field.size(); ++i)
    s.add(std::pow(weight_at(i) * field[i], rp));
  return std::pow(s.value() * std::pow(spec.h(), axes), 1.0 / rp);
}

}  // namespace maxharm
