#include "maxharm/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxharm/parallel.hpp"

namespace maxharm {

CubeFamily CubeFamily::standard(const GridSpec& spec, bool dyadic_only, int dense_max_cells,
                                int stride_divisor) {
  spec.validate();
  require(stride_divisor >= 1, "CubeFamily: stride divisor must be >= 1");
  CubeFamily fam;
  fam.spec = spec;
  fam.dyadic_only = dyadic_only;
  for (int w = 1; w <= spec.N / 2; w *= 2) {
    Scale s;
    s.side_cells = w;
    if (dyadic_only)
      s.stride_cells = w;
    else
      s.stride_cells = w <= dense_max_cells ? 1 : std::max(1, w / stride_divisor);
    fam.scales.push_back(s);
  }
  fam.validate();
  return fam;
}

void CubeFamily::validate() const {
  require(!scales.empty(), "CubeFamily: empty family");
  int prev = 0;
  for (const auto& s : scales) {
    require(s.side_cells > prev, "CubeFamily: side lengths must be strictly increasing");
    require(s.side_cells <= spec.N, "CubeFamily: cube exceeds the box");
    require(s.stride_cells >= 1 && s.stride_cells <= s.side_cells,
            "CubeFamily: stride must divide coverage");
    require(spec.N % s.stride_cells == 0, "CubeFamily: stride must divide N");
    prev = s.side_cells;
  }
}

namespace detail {

namespace {

// 1-D circular prefix table
struct Prefix1 {
  Eigen::ArrayXd p;  // size N+1
  double window(int a, int w, int N) const {
    if (a + w <= N) return p[a + w] - p[a];
    return (p[N] - p[a]) + p[a + w - N];
  }
};

Prefix1 build_prefix1(const Eigen::ArrayXd& g, int N) {
  Prefix1 pr;
  pr.p.resize(N + 1);
  pr.p[0] = 0.0;
  for (int i = 0; i < N; ++i) pr.p[i + 1] = pr.p[i] + g[i];
  return pr;
}

// 2-D summed-area table with wraparound windows
struct Prefix2 {
  Eigen::ArrayXd p;  // (N+1)^2, row-major
  int N = 0;
  double rect(int r0, int c0, int h, int w) const {
    auto at = [&](int r, int c) { return p[std::int64_t(r) * (N + 1) + c]; };
    return at(r0 + h, c0 + w) - at(r0, c0 + w) - at(r0 + h, c0) + at(r0, c0);
  }
  double window(const int* a, int w) const {
    // split each axis into at most two non-wrapping segments
    int r_seg[2][2], c_seg[2][2];
    int nr = 0, nc = 0;
    auto split = [&](int start, int len, int seg[2][2]) {
      if (start + len <= N) {
        seg[0][0] = start;
        seg[0][1] = len;
        return 1;
      }
      seg[0][0] = start;
      seg[0][1] = N - start;
      seg[1][0] = 0;
      seg[1][1] = start + len - N;
      return 2;
    };
    nr = split(a[0], w, r_seg);
    nc = split(a[1], w, c_seg);
    double s = 0.0;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) s += rect(r_seg[i][0], c_seg[j][0], r_seg[i][1], c_seg[j][1]);
    return s;
  }
};

Prefix2 build_prefix2(const Eigen::ArrayXd& g, int N) {
  Prefix2 pr;
  pr.N = N;
  pr.p = Eigen::ArrayXd::Zero(std::int64_t(N + 1) * (N + 1));
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      std::int64_t row = std::int64_t(r + 1) * (N + 1);
      std::int64_t rowm = std::int64_t(r) * (N + 1);
      pr.p[row + c + 1] = g[std::int64_t(r) * N + c] + pr.p[rowm + c + 1] + pr.p[row + c] -
                          pr.p[rowm + c];
    }
  return pr;
}

// anchors covering cell j at one axis: multiples of stride in [j-w+1, j]
template <typename Fn>
void covering_anchors(int j, int w, int stride, int N, Fn&& fn) {
  int lo = j - w + 1;
  int qlo = lo >= 0 ? (lo + stride - 1) / stride : -((-lo) / stride);
  int qhi = j >= 0 ? j / stride : -((-j + stride - 1) / stride);
  for (int q = qlo; q <= qhi; ++q) {
    int a = q * stride;
    fn(((a % N) + N) % N);
  }
}

}  // namespace

CubeTables cube_sums(const CubeFamily& fam, const Eigen::ArrayXd& integrand) {
  const GridSpec& spec = fam.spec;
  CubeTables tables(fam.scales.size());
  if (spec.n == 1) {
    Prefix1 pr = build_prefix1(integrand, spec.N);
    for (size_t s = 0; s < fam.scales.size(); ++s) {
      int w = fam.scales[s].side_cells, st = fam.scales[s].stride_cells;
      int count = spec.N / st;
      tables[s].resize(count);
      for (int q = 0; q < count; ++q) tables[s][q] = pr.window(q * st, w, spec.N);
    }
  } else {
    Prefix2 pr = build_prefix2(integrand, spec.N);
    for (size_t s = 0; s < fam.scales.size(); ++s) {
      int w = fam.scales[s].side_cells, st = fam.scales[s].stride_cells;
      int count = spec.N / st;
      tables[s].resize(std::int64_t(count) * count);
      for (int qr = 0; qr < count; ++qr)
        for (int qc = 0; qc < count; ++qc) {
          int a[2] = {qr * st, qc * st};
          tables[s][std::int64_t(qr) * count + qc] = pr.window(a, w);
        }
    }
  }
  return tables;
}

Eigen::ArrayXd max_field(const CubeFamily& fam, const CubeTables& cube_values) {
  const GridSpec& spec = fam.spec;
  Eigen::ArrayXd out(spec.size());
  parallel_for(spec.size(), [&](std::int64_t idx) {
    double best = -std::numeric_limits<double>::infinity();
    if (spec.n == 1) {
      int j = int(idx);
      for (size_t s = 0; s < fam.scales.size(); ++s) {
        int w = fam.scales[s].side_cells, st = fam.scales[s].stride_cells;
        covering_anchors(j, w, st, spec.N, [&](int a) {
          best = std::max(best, cube_values[s][a / st]);
        });
      }
    } else {
      int jr = int(idx / spec.N), jc = int(idx % spec.N);
      for (size_t s = 0; s < fam.scales.size(); ++s) {
        int w = fam.scales[s].side_cells, st = fam.scales[s].stride_cells;
        int count = spec.N / st;
        covering_anchors(jr, w, st, spec.N, [&](int ar) {
          covering_anchors(jc, w, st, spec.N, [&](int ac) {
            best = std::max(best, cube_values[s][std::int64_t(ar / st) * count + ac / st]);
          });
        });
      }
    }
    out[idx] = best;
  });
  return out;
}

void gather_cube(const Eigen::ArrayXcd& v, const GridSpec& spec, int side_cells,
                 const int* anchor, std::vector<cplx>& out) {
  const int N = spec.N;
  if (spec.n == 1) {
    out.resize(size_t(side_cells));
    for (int i = 0; i < side_cells; ++i) out[size_t(i)] = v[(anchor[0] + i) % N];
  } else {
    out.resize(size_t(side_cells) * size_t(side_cells));
    size_t t = 0;
    for (int i = 0; i < side_cells; ++i) {
      std::int64_t row = std::int64_t((anchor[0] + i) % N) * N;
      for (int j = 0; j < side_cells; ++j) out[t++] = v[row + (anchor[1] + j) % N];
    }
  }
}

}  // namespace detail

namespace {

Eigen::ArrayXd abs_pow(const Eigen::ArrayXcd& v, double r) {
  Eigen::ArrayXd out(v.size());
  for (std::int64_t i = 0; i < v.size(); ++i) out[i] = std::pow(std::abs(v[i]), r);
  return out;
}

void check_grid(const GridFunction& f, const CubeFamily& fam, const char* who) {
  require(!fam.scales.empty(), std::string(who) + ": empty cube family");
  require(f.spec() == fam.spec, std::string(who) + ": grid mismatch");
}

// per-cube best-constant oscillation values for selected scales
detail::CubeTables oscillation_tables(const GridFunction& f, const CubeFamily& fam, double t,
                                      const std::vector<char>& enabled) {
  const GridSpec& spec = f.spec();
  detail::CubeTables tables(fam.scales.size());
  for (size_t s = 0; s < fam.scales.size(); ++s) {
    if (!enabled[s]) continue;
    int w = fam.scales[s].side_cells, st = fam.scales[s].stride_cells;
    std::int64_t count = fam.anchor_count(s);
    int per_axis = spec.N / st;
    tables[s].resize(count);
    auto& table = tables[s];
    parallel_for(count, [&, s, w, st, per_axis](std::int64_t q) {
      int anchor[2] = {0, 0};
      if (spec.n == 1)
        anchor[0] = int(q) * st;
      else {
        anchor[0] = int(q / per_axis) * st;
        anchor[1] = int(q % per_axis) * st;
      }
      std::vector<cplx> samples;
      detail::gather_cube(f.values(), spec, w, anchor, samples);
      table[q] = best_constant(samples, t).value;
    });
  }
  return tables;
}

}  // namespace

MaximalField hl_maximal(const GridFunction& f, double r, const CubeFamily& fam) {
  require(r > 0, "hl_maximal: r must be positive");
  check_grid(f, fam, "hl_maximal");
  auto tables = detail::cube_sums(fam, abs_pow(f.values(), r));
  for (size_t s = 0; s < tables.size(); ++s) {
    double cells = std::pow(double(fam.scales[s].side_cells), f.spec().n);
    tables[s] /= cells;
  }
  Eigen::ArrayXd field = detail::max_field(fam, tables).pow(1.0 / r);
  return {f.spec(), std::move(field), "hl_maximal r=" + std::to_string(r)};
}

MaximalField multisublinear_maximal(std::span<const GridFunction> fs, double r,
                                    const CubeFamily& fam) {
  require(r > 0, "multisublinear_maximal: r must be positive");
  require(!fs.empty(), "multisublinear_maximal: no functions");
  for (const auto& f : fs) check_grid(f, fam, "multisublinear_maximal");

  std::vector<detail::CubeTables> per_factor;
  per_factor.reserve(fs.size());
  for (const auto& f : fs) per_factor.push_back(detail::cube_sums(fam, abs_pow(f.values(), r)));

  detail::CubeTables prod(fam.scales.size());
  for (size_t s = 0; s < fam.scales.size(); ++s) {
    double cells = std::pow(double(fam.scales[s].side_cells), fam.spec.n);
    prod[s] = Eigen::ArrayXd::Ones(per_factor[0][s].size());
    for (const auto& tab : per_factor) prod[s] *= tab[s] / cells;
  }
  Eigen::ArrayXd field = detail::max_field(fam, prod).pow(1.0 / r);
  return {fam.spec, std::move(field),
          "multisublinear_maximal l=" + std::to_string(fs.size()) + " r=" + std::to_string(r)};
}

MaximalField dyadic_maximal(const GridFunction& f, const CubeFamily& fam) {
  require(fam.dyadic_only, "dyadic_maximal: family must be dyadic (aligned anchors)");
  check_grid(f, fam, "dyadic_maximal");
  auto tables = detail::cube_sums(fam, abs_pow(f.values(), 1.0));
  for (size_t s = 0; s < tables.size(); ++s)
    tables[s] /= std::pow(double(fam.scales[s].side_cells), f.spec().n);
  Eigen::ArrayXd field = detail::max_field(fam, tables);
  return {f.spec(), std::move(field), "dyadic_maximal"};
}

BestConstant best_constant(std::span<const cplx> samples, double t) {
  require(t > 0, "best_constant: exponent t must be positive");
  require(!samples.empty(), "best_constant: empty sample set");
  const std::int64_t n = std::int64_t(samples.size());

  auto objective = [&](cplx c) {
    double acc = 0.0;
    for (const cplx& v : samples) acc += std::pow(std::abs(v - c), t);
    return acc / double(n);
  };

  // candidate seeds: 0, mean, componentwise median, 16-point subsample
  std::vector<cplx> cands;
  cands.push_back(cplx(0, 0));
  cplx mean(0, 0);
  for (const cplx& v : samples) mean += v;
  mean /= double(n);
  cands.push_back(mean);
  {
    std::vector<double> re(samples.size()), im(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
      re[i] = samples[i].real();
      im[i] = samples[i].imag();
    }
    size_t mid = (samples.size() - 1) / 2;
    std::nth_element(re.begin(), re.begin() + std::ptrdiff_t(mid), re.end());
    std::nth_element(im.begin(), im.begin() + std::ptrdiff_t(mid), im.end());
    cands.push_back(cplx(re[mid], im[mid]));
  }
  size_t stride = std::max<size_t>(1, samples.size() / 16);
  for (size_t i = 0; i < samples.size() && cands.size() < 20; i += stride)
    cands.push_back(samples[i]);

  auto descend = [&](cplx c, double start_obj) {
    double best = start_obj;
    double step = 0.0;
    for (const cplx& v : samples) step = std::max(step, std::abs(v - c));
    for (int iter = 0; iter < 40 && step > 0.0; ++iter) {
      const cplx moves[4] = {c + cplx(step, 0), c - cplx(step, 0), c + cplx(0, step),
                             c - cplx(0, step)};
      double move_best = best;
      cplx move_c = c;
      for (const cplx& mc : moves) {
        double o = objective(mc);
        if (o < move_best) {
          move_best = o;
          move_c = mc;
        }
      }
      if (move_best < best) {
        best = move_best;
        c = move_c;
      } else {
        step *= 0.5;
      }
    }
    return std::pair<cplx, double>(c, best);
  };

  cplx c = cands[0];
  double best = objective(c);
  if (t >= 1.0) {
    // convex objective: one descent from the best seed reaches the minimum
    for (size_t i = 1; i < cands.size(); ++i) {
      double o = objective(cands[i]);
      if (o < best) {
        best = o;
        c = cands[i];
      }
    }
    auto [cc, bb] = descend(c, best);
    c = cc;
    best = bb;
  } else {
    // t < 1 is nonconvex with basins at sample clusters: descend from every
    // seed and keep the best endpoint
    for (const cplx& seed : cands) {
      auto [cc, bb] = descend(seed, objective(seed));
      if (bb < best) {
        best = bb;
        c = cc;
      }
    }
  }

  KahanSum acc;
  for (const cplx& v : samples) acc.add(std::pow(std::abs(v - c), t));
  return {c, std::pow(acc.value() / double(n), 1.0 / t)};
}

MaximalField sharp_maximal_homogeneous(const GridFunction& f, const CubeFamily& fam) {
  check_grid(f, fam, "sharp_maximal_homogeneous");
  std::vector<char> all(fam.scales.size(), 1);
  auto tables = oscillation_tables(f, fam, 1.0, all);
  Eigen::ArrayXd field = detail::max_field(fam, tables);
  return {f.spec(), std::move(field), "sharp_maximal_homogeneous"};
}

MaximalField sharp_maximal_inhomogeneous(const GridFunction& f, double r, const CubeFamily& fam) {
  require(r > 0, "sharp_maximal_inhomogeneous: r must be positive");
  check_grid(f, fam, "sharp_maximal_inhomogeneous");
  require(f.spec().h() <= 1.0 / 16.0 + 1e-12,
          "sharp_maximal_inhomogeneous: grid must resolve unit side with >= 16 cells");

  std::vector<char> small(fam.scales.size(), 0), large(fam.scales.size(), 0);
  bool has_small = false, has_large = false;
  for (size_t s = 0; s < fam.scales.size(); ++s) {
    double side = fam.scales[s].side_cells * f.spec().h();
    if (side >= 1.0) {
      large[s] = 1;
      has_large = true;
    } else {
      small[s] = 1;
      has_small = true;
    }
  }
  require(has_small && has_large,
          "sharp_maximal_inhomogeneous: family must straddle the side=1 threshold");

  // large cubes: plain L^r averages
  auto avg_tables = detail::cube_sums(fam, abs_pow(f.values(), r));
  detail::CubeTables large_tables(fam.scales.size());
  for (size_t s = 0; s < fam.scales.size(); ++s) {
    if (!large[s]) {
      large_tables[s] = Eigen::ArrayXd::Constant(avg_tables[s].size(),
                                                 -std::numeric_limits<double>::infinity());
      continue;
    }
    double cells = std::pow(double(fam.scales[s].side_cells), f.spec().n);
    large_tables[s] = (avg_tables[s] / cells).pow(1.0 / r);
  }

  // small cubes: best-constant oscillation with exponent r
  auto osc_tables = oscillation_tables(f, fam, r, small);
  for (size_t s = 0; s < fam.scales.size(); ++s)
    if (!small[s])
      osc_tables[s] = Eigen::ArrayXd::Constant(avg_tables[s].size(),
                                               -std::numeric_limits<double>::infinity());

  Eigen::ArrayXd field =
      detail::max_field(fam, large_tables).max(detail::max_field(fam, osc_tables));
  return {f.spec(), std::move(field), "sharp_maximal_inhomogeneous r=" + std::to_string(r)};
}

double bmo_seminorm(const GridFunction& f, const CubeFamily& fam, double t) {
  require(t > 0, "bmo_seminorm: t must be positive");
  check_grid(f, fam, "bmo_seminorm");
  std::vector<char> all(fam.scales.size(), 1);
  auto tables = oscillation_tables(f, fam, t, all);
  double best = 0.0;
  for (const auto& tab : tables)
    for (std::int64_t i = 0; i < tab.size(); ++i) best = std::max(best, tab[i]);
  return best;
}

}  // namespace maxharm
