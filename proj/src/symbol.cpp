#include "maxharm/symbol.hpp"

#include <cmath>

#include "maxharm/parallel.hpp"

namespace maxharm {

namespace {

double stacked_norm(std::span<const double> xi) {
  double r2 = 0.0;
  for (double c : xi) r2 += c * c;
  return std::sqrt(r2);
}

int grid_k_max(const GridSpec& spec) { return int(std::floor(std::log2(spec.nyquist()))) - 1; }

}  // namespace

Symbol constant_symbol(SymbolClassParams params) {
  std::vector<SymbolTerm> terms(1);
  terms[0].g = [](std::span<const double>) { return cplx(1.0, 0.0); };
  SymbolDescriptor d;
  d.family = "constant";
  d.m = params.m;
  d.rho = params.rho;
  d.delta = params.delta;
  d.l = params.l;
  d.n = params.n;
  return Symbol(params, std::move(terms), d);
}

Symbol multiplier_symbol(SymbolClassParams params, FreqFn g, std::string note) {
  std::vector<SymbolTerm> terms(1);
  terms[0].g = std::move(g);
  SymbolDescriptor d;
  d.family = "multiplier";
  d.m = params.m;
  d.rho = params.rho;
  d.delta = params.delta;
  d.l = params.l;
  d.n = params.n;
  d.note = std::move(note);
  return Symbol(params, std::move(terms), d);
}

Symbol dyadic_modulation_symbol(SymbolClassParams params, int K, std::uint64_t seed,
                                const GridSpec& spec) {
  params.validate();
  require(params.n == spec.n, "dyadic_modulation_symbol: grid dimension mismatch");
  require(K >= 1, "dyadic_modulation_symbol: K must be >= 1");

  // Band limit: components up to index K have support |xi| <= 2^{K+1}, which
  // must sit inside the band where the grid partition sums to one.
  int k_adm = grid_k_max(spec) - 1;
  double v_max = std::ldexp(1.0, int(std::ceil(K * params.rho))) / kTwoPi;
  if (K > k_adm || v_max >= spec.nyquist()) {
    int by_mod = params.rho > 0
                     ? int(std::floor(std::log2(kTwoPi * spec.nyquist() * 0.99) / params.rho))
                     : k_adm;
    fail("dyadic_modulation_symbol: K=" + std::to_string(K) +
         " exceeds the grid; max admissible K = " + std::to_string(std::min(k_adm, by_mod)));
  }

  SplitMix64 rng(seed);
  std::vector<SymbolTerm> terms;
  terms.reserve(size_t(K));
  for (int k = 1; k <= K; ++k) {
    cplx c = std::polar(1.0, kTwoPi * rng.next_double());
    double amp = std::pow(2.0, k * params.m);
    SymbolTerm t;
    t.g = [c, amp, k](std::span<const double> xi) {
      return c * amp * psi_hat_radial(std::ldexp(stacked_norm(xi), -k));
    };
    double vmag = std::pow(2.0, k * params.rho) / kTwoPi;
    if (params.n == 1) {
      t.v[0] = (rng.next_double() < 0.5 ? -1.0 : 1.0) * vmag;
    } else {
      double ang = kTwoPi * rng.next_double();
      t.v[0] = vmag * std::cos(ang);
      t.v[1] = vmag * std::sin(ang);
    }
    terms.push_back(std::move(t));
  }
  SymbolDescriptor d;
  d.family = "dyadic_modulation";
  d.m = params.m;
  d.rho = params.rho;
  d.delta = params.delta;
  d.l = params.l;
  d.n = params.n;
  d.K = K;
  d.seed = seed;
  return Symbol(params, std::move(terms), d);
}

Symbol oscillatory_symbol(double m, double rho, const GridSpec& spec) {
  require(rho > 0.0 && rho < 1.0, "oscillatory_symbol: rho must lie in (0,1)");
  int kb = grid_k_max(spec) - 1;
  require(kb >= 1, "oscillatory_symbol: grid band too small");
  SymbolClassParams params{m, rho, 0.0, 1, spec.n};
  std::vector<SymbolTerm> terms(1);
  terms[0].g = [m, rho, kb](std::span<const double> xi) {
    double r = stacked_norm(xi);
    double cut = (1.0 - phi_hat_radial(r)) * phi_hat_radial(std::ldexp(r, -kb));
    if (cut == 0.0) return cplx(0.0, 0.0);
    double amp = cut * std::pow(1.0 + r * r, m / 2.0);
    return amp * std::polar(1.0, std::pow(r, 1.0 - rho));
  };
  SymbolDescriptor d;
  d.family = "oscillatory";
  d.m = m;
  d.rho = rho;
  d.delta = 0.0;
  d.l = 1;
  d.n = spec.n;
  d.K = kb;
  return Symbol(params, std::move(terms), d);
}

std::vector<Symbol> lp_pieces(const Symbol& sigma, const LpPartition& p) {
  const auto& sp = sigma.params();
  require(p.total_dim == sp.n * sp.l, "lp_pieces: partition dimension must equal n*l");
  std::vector<Symbol> pieces;
  pieces.reserve(size_t(p.k_max) + 1);
  for (int k = 0; k <= p.k_max; ++k) {
    std::vector<SymbolTerm> terms;
    terms.reserve(sigma.terms().size());
    for (const auto& t : sigma.terms()) {
      SymbolTerm nt;
      nt.v = t.v;
      FreqFn base = t.g;
      nt.g = [base, p, k](std::span<const double> xi) {
        double w = p.window(k, stacked_norm(xi));
        if (w == 0.0) return cplx(0.0, 0.0);
        return base(xi) * w;
      };
      terms.push_back(std::move(nt));
    }
    SymbolDescriptor d = sigma.descriptor();
    d.note = d.note.empty() ? ("piece:" + std::to_string(k)) : (d.note + "|piece:" + std::to_string(k));
    pieces.push_back(Symbol(sp, std::move(terms), d).with_piece_index(k));
  }
  return pieces;
}

Symbol dilate_symbol(const Symbol& piece, double lambda, int k) {
  const auto& sp = piece.params();
  require(lambda >= 0.0 && lambda <= sp.rho, "dilate_symbol: lambda must lie in [0, rho]");
  require(k >= 0, "dilate_symbol: piece index must be >= 0");

  const double xi_scale = std::pow(2.0, lambda * k);
  const double x_scale = 1.0 / xi_scale;
  const int d_total = sp.n * sp.l;

  std::vector<SymbolTerm> terms;
  terms.reserve(piece.terms().size());
  for (const auto& t : piece.terms()) {
    SymbolTerm nt;
    for (int a = 0; a < sp.n; ++a) nt.v[size_t(a)] = t.v[size_t(a)] * x_scale;
    FreqFn base = t.g;
    nt.g = [base, xi_scale, d_total](std::span<const double> xi) {
      std::array<double, 8> buf{};
      for (int a = 0; a < d_total; ++a) buf[size_t(a)] = xi[size_t(a)] * xi_scale;
      return base(std::span<const double>(buf.data(), size_t(d_total)));
    };
    terms.push_back(std::move(nt));
  }

  SymbolClassParams np = sp;
  np.m = sp.m / (1.0 - lambda);
  np.rho = (sp.rho - lambda) / (1.0 - lambda);
  np.delta = np.rho;
  SymbolDescriptor d = piece.descriptor();
  d.note += "|dilated:lambda=" + std::to_string(lambda) + ",k=" + std::to_string(k);
  return Symbol(np, std::move(terms), d);
}

double SeminormReport::entry(std::span<const int> orders) const {
  for (const auto& e : entries) {
    if (e.orders.size() == orders.size() &&
        std::equal(e.orders.begin(), e.orders.end(), orders.begin()))
      return e.value;
  }
  fail("SeminormReport: no such entry");
}

namespace {

// Central difference weights for orders 0..2, taps at offsets {-1, 0, +1}.
const double kFdW[3][3] = {{0.0, 1.0, 0.0}, {-0.5, 0.0, 0.5}, {1.0, -2.0, 1.0}};

struct AxisSamples {
  std::vector<double> centers;
  double step;
};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    v[size_t(i)] = count == 1 ? lo : lo + (hi - lo) * i / double(count - 1);
  return v;
}

// Dyadically graded frequency lattice: a uniform core on [-2, 2] plus the
// same number of points per octave out to the band edge, so every annulus is
// sampled at equal resolution regardless of the grid's Nyquist band.
std::vector<double> graded_freq_centers(double band, int core_count, int per_octave) {
  std::vector<double> pts = linspace(-2.0, 2.0, core_count);
  for (double lo = 2.0; lo < band; lo *= 2.0) {
    double hi = std::min(2.0 * lo, band);
    for (double p : linspace(lo, hi, per_octave)) {
      pts.push_back(p);
      pts.push_back(-p);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

SeminormReport estimate_seminorms(const Symbol& sigma, const SymbolClassParams& declared,
                                  const GridSpec& spec, int max_order, double ceiling) {
  declared.validate();
  require(max_order >= 0 && max_order <= 2, "estimate_seminorms: max_order must be 0..2");
  const int n = declared.n, l = declared.l;
  require(l <= 3, "estimate_seminorms: l > 3 not supported");
  const int axes = n + n * l;

  // Sample lattice: centers strided over the box, graded over the band,
  // sized to keep the evaluation tensor around a couple million points.
  int x_count = (n * l <= 2) ? 33 : 9;
  int core = (l == 1 && n == 1) ? 65 : (axes <= 3 ? 17 : 9);
  int per_octave = (l == 1 && n == 1) ? 33 : (axes <= 3 ? 9 : 5);

  std::vector<AxisSamples> axis(static_cast<size_t>(axes));
  for (int a = 0; a < n; ++a) {
    axis[size_t(a)].centers = linspace(-spec.L / 2, spec.L / 2 - spec.h(), x_count);
    axis[size_t(a)].step = spec.h();
  }
  double band = spec.nyquist() - 2.0 * spec.freq_step();
  for (int a = n; a < axes; ++a) {
    axis[size_t(a)].centers = graded_freq_centers(band, core, per_octave);
    axis[size_t(a)].step = spec.freq_step();
  }

  // Evaluation tensor over (3 * centers) points per axis.
  std::vector<std::int64_t> dim(static_cast<size_t>(axes)), stride(static_cast<size_t>(axes));
  std::int64_t total = 1;
  for (int a = axes - 1; a >= 0; --a) {
    dim[size_t(a)] = 3 * std::int64_t(axis[size_t(a)].centers.size());
    stride[size_t(a)] = total;
    total *= dim[size_t(a)];
  }
  Eigen::ArrayXcd table(total);
  parallel_for(total, [&](std::int64_t idx) {
    double x[2] = {0, 0};
    double xi[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::int64_t rem = idx;
    for (int a = 0; a < axes; ++a) {
      std::int64_t q = rem / stride[size_t(a)];
      rem %= stride[size_t(a)];
      int c = int(q / 3), tap = int(q % 3);
      double coord = axis[size_t(a)].centers[size_t(c)] + (tap - 1) * axis[size_t(a)].step;
      if (a < n)
        x[a] = coord;
      else
        xi[a - n] = coord;
    }
    table[idx] = sigma.eval(std::span<const double>(x, size_t(n)),
                            std::span<const double>(xi, size_t(n * l)));
  });
  require(table.allFinite(), "estimate_seminorms: non-finite difference quotients");

  // Enumerate per-axis derivative orders with |alpha| <= max_order and
  // |beta_j| <= max_order per factor.
  std::vector<std::vector<int>> combos;
  std::vector<int> cur(size_t(axes), 0);
  std::function<void(int)> gen = [&](int a) {
    if (a == axes) {
      int asum = 0;
      for (int i = 0; i < n; ++i) asum += cur[size_t(i)];
      if (asum > max_order) return;
      for (int j = 0; j < l; ++j) {
        int bsum = 0;
        for (int i = 0; i < n; ++i) bsum += cur[size_t(n + j * n + i)];
        if (bsum > max_order) return;
      }
      combos.push_back(cur);
      return;
    }
    for (int o = 0; o <= max_order; ++o) {
      cur[size_t(a)] = o;
      gen(a + 1);
    }
    cur[size_t(a)] = 0;
  };
  gen(0);

  std::int64_t n_centers = 1;
  for (int a = 0; a < axes; ++a) n_centers *= std::int64_t(axis[size_t(a)].centers.size());

  SeminormReport report;
  report.declared = declared;
  report.ceiling = ceiling;
  report.entries.resize(combos.size());

  std::vector<double> combo_max(combos.size(), 0.0);
  parallel_for(std::int64_t(combos.size()), [&](std::int64_t ci) {
    const auto& orders = combos[size_t(ci)];
    int a_ord = 0, b_ord = 0;
    double stepw = 1.0;
    for (int a = 0; a < axes; ++a) {
      if (a < n)
        a_ord += orders[size_t(a)];
      else
        b_ord += orders[size_t(a)];
      stepw *= std::pow(axis[size_t(a)].step, orders[size_t(a)]);
    }
    const double expo = declared.m + declared.delta * a_ord - declared.rho * b_ord;

    double best = 0.0;
    for (std::int64_t c = 0; c < n_centers; ++c) {
      // decode center combo, accumulate stencil
      std::int64_t crem = c;
      std::int64_t base = 0;
      double xi_abs[3] = {0, 0, 0};  // |xi_j| accumulators (sum of squares)
      for (int a = axes - 1; a >= 0; --a) {
        std::int64_t nc = std::int64_t(axis[size_t(a)].centers.size());
        int cidx = int(crem % nc);
        crem /= nc;
        base += (3 * std::int64_t(cidx) + 1) * stride[size_t(a)];
        if (a >= n) {
          int j = (a - n) / n;
          double coord = axis[size_t(a)].centers[size_t(cidx)];
          xi_abs[j] += coord * coord;
        }
      }
      cplx fd(0.0, 0.0);
      // taps over the 3^axes cluster
      std::int64_t taps = 1;
      for (int a = 0; a < axes; ++a) taps *= 3;
      for (std::int64_t t = 0; t < taps; ++t) {
        std::int64_t trem = t;
        double w = 1.0;
        std::int64_t off = 0;
        for (int a = axes - 1; a >= 0; --a) {
          int tap = int(trem % 3);
          trem /= 3;
          w *= kFdW[orders[size_t(a)]][tap];
          off += std::int64_t(tap - 1) * stride[size_t(a)];
        }
        if (w != 0.0) fd += w * table[base + off];
      }
      double weight_base = 1.0;
      for (int j = 0; j < l; ++j) weight_base += std::sqrt(xi_abs[j]);
      double ratio = std::abs(fd) / stepw / std::pow(weight_base, expo);
      best = std::max(best, ratio);
    }
    combo_max[size_t(ci)] = best;
  });

  for (size_t ci = 0; ci < combos.size(); ++ci) {
    report.entries[ci].orders = combos[ci];
    report.entries[ci].value = combo_max[ci];
    report.max_entry = std::max(report.max_entry, combo_max[ci]);
  }
  require(std::isfinite(report.max_entry), "estimate_seminorms: non-finite difference quotients");
  report.pass = report.max_entry <= ceiling;
  return report;
}

}  // namespace maxharm
