#include <doctest.h>

#include "maxharm/symbol.hpp"

using namespace maxharm;

namespace {

double eval_abs(const Symbol& s, double x, double xi) {
  double xv[1] = {x}, xiv[1] = {xi};
  return std::abs(s.eval(std::span<const double>(xv, 1), std::span<const double>(xiv, 1)));
}

cplx eval_at(const Symbol& s, double x, double xi) {
  double xv[1] = {x}, xiv[1] = {xi};
  return s.eval(std::span<const double>(xv, 1), std::span<const double>(xiv, 1));
}

}  // namespace

TEST_CASE("class parameter validation") {
  SymbolClassParams bad_rho{0, 1.0, 0.5, 1, 1};
  CHECK_THROWS_AS(bad_rho.validate(), std::invalid_argument);
  SymbolClassParams bad_delta{0, 0.5, 0.7, 1, 1};
  CHECK_THROWS_AS(bad_delta.validate(), std::invalid_argument);
  SymbolClassParams bad_l{0, 0.5, 0.5, 0, 1};
  CHECK_THROWS_AS(bad_l.validate(), std::invalid_argument);
  SymbolClassParams ok{-1, 0.5, 0.5, 2, 1};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("dyadic modulation symbol: determinism and rho = 0 reduction") {
  GridSpec spec(1, 16.0, 512);
  SymbolClassParams params{0.0, 0.0, 0.0, 1, 1};
  Symbol a = dyadic_modulation_symbol(params, 1, 11, spec);
  Symbol b = dyadic_modulation_symbol(params, 1, 11, spec);
  for (double x : {-3.0, 0.0, 5.0})
    for (double xi : {0.5, 1.5, 3.0})
      CHECK(eval_at(a, x, xi) == eval_at(b, x, xi));

  // with rho = 0 the modulation is |v| = 1/(2 pi): the x-derivative entries
  // stay below 1 + fd slack
  SeminormReport rep = estimate_seminorms(a, params, spec);
  CHECK(rep.pass);
  int o10[2] = {1, 0};
  int o20[2] = {2, 0};
  CHECK(rep.entry(std::span<const int>(o10, 2)) <= 1.0 + 1e-6);
  CHECK(rep.entry(std::span<const int>(o20, 2)) <= 1.0 + 1e-6);
  // |sigma(x, xi)| = |psi_hat(xi/2)| for the single-term family
  for (double xi : {0.8, 1.5, 2.5, 3.5})
    CHECK(eval_abs(a, 0.3, xi) == doctest::Approx(psi_hat_radial(xi / 2)).epsilon(1e-12));
}

TEST_CASE("dyadic modulation symbol certifies at the critical order") {
  GridSpec spec(1, 16.0, 1024);
  SymbolClassParams params{-1.0, 0.5, 0.5, 1, 1};
  Symbol s = dyadic_modulation_symbol(params, 3, 42, spec);
  SeminormReport rep = estimate_seminorms(s, params, spec);
  CHECK(rep.pass);
  CHECK(rep.max_entry <= 4 * kPi * kPi + 1.0);
  CHECK(rep.max_entry > 0.0);
}

TEST_CASE("dyadic modulation symbol: K beyond the grid is rejected with the max") {
  GridSpec spec(1, 16.0, 512);  // nyquist 16 -> admissible K = 2
  SymbolClassParams params{-1.0, 0.5, 0.5, 1, 1};
  try {
    dyadic_modulation_symbol(params, 6, 1, spec);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("max admissible K = 2") != std::string::npos);
  }
}

TEST_CASE("declaring a lower order makes certification fail with 2^K growth") {
  GridSpec spec(1, 16.0, 1024);
  SymbolClassParams params{-1.0, 0.5, 0.5, 1, 1};
  Symbol s = dyadic_modulation_symbol(params, 3, 42, spec);
  SymbolClassParams lowered = params;
  lowered.m = params.m - 1.0;
  SeminormReport rep = estimate_seminorms(s, lowered, spec);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_entry >= std::ldexp(1.0, 3 - 1));  // grows like 2^K
}

TEST_CASE("oscillatory symbol: cutoff, modulus, refinement-stable seminorms") {
  GridSpec spec(1, 16.0, 1024);  // band: one for |xi| <= 4, zero beyond 8
  Symbol s = oscillatory_symbol(-0.5, 0.5, spec);
  CHECK(eval_abs(s, 0.0, 0.0) == 0.0);        // low-pass cutoff
  for (double xi : {2.0, 2.5, 3.0, 4.0}) {    // unimodular phase region
    double expect = std::pow(1.0 + xi * xi, -0.25);
    CHECK(eval_abs(s, 1.0, xi) == doctest::Approx(expect).epsilon(1e-12));
  }
  SeminormReport rep = estimate_seminorms(s, s.params(), spec);
  CHECK(rep.pass);

  int o01[2] = {0, 1};
  double c1 = rep.entry(std::span<const int>(o01, 2));
  GridSpec fine(1, 16.0, 2048);
  SeminormReport rep2 = estimate_seminorms(oscillatory_symbol(-0.5, 0.5, fine), s.params(), fine);
  double c1f = rep2.entry(std::span<const int>(o01, 2));
  CHECK(std::abs(c1 - c1f) <= 0.05 * c1);

  CHECK_THROWS_AS(oscillatory_symbol(-0.5, 0.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(oscillatory_symbol(-0.5, 1.0, spec), std::invalid_argument);
}

TEST_CASE("constant symbol: C00 = 1 and derivative entries vanish") {
  GridSpec spec(1, 32.0, 512);
  SymbolClassParams params{0.0, 0.5, 0.5, 1, 1};
  Symbol s = constant_symbol(params);
  SeminormReport rep = estimate_seminorms(s, params, spec);
  int o00[2] = {0, 0};
  CHECK(rep.entry(std::span<const int>(o00, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& e : rep.entries) {
    int total = 0;
    for (int o : e.orders) total += o;
    if (total > 0) CHECK(e.value <= 1e-8);
  }
}

TEST_CASE("bessel multiplier declared at order one passes with C <= 2") {
  GridSpec spec(1, 32.0, 512);
  SymbolClassParams params{1.0, 0.0, 0.0, 1, 1};
  Symbol s = multiplier_symbol(params, [](std::span<const double> xi) {
    return cplx(std::sqrt(1.0 + xi[0] * xi[0]), 0.0);
  });
  SeminormReport rep = estimate_seminorms(s, params, spec, 2, 2.0);
  CHECK(rep.pass);
  int o01[2] = {0, 1};
  CHECK(rep.entry(std::span<const int>(o01, 2)) <= 2.0);
}

TEST_CASE("lp_pieces: constant symbol gives the windows; reconstruction holds") {
  GridSpec spec(1, 16.0, 1024);
  LpPartition part = build_partition(spec, 1);
  SymbolClassParams params{0.0, 0.5, 0.5, 1, 1};
  Symbol one = constant_symbol(params);
  auto pieces = lp_pieces(one, part);
  REQUIRE(int(pieces.size()) == part.k_max + 1);
  for (double xi : {0.3, 0.9, 1.7, 3.1, 6.3}) {
    CHECK(eval_abs(pieces[0], 0.0, xi) == doctest::Approx(part.phi_hat(xi)).epsilon(1e-14));
    for (int k = 1; k <= part.k_max; ++k)
      CHECK(eval_abs(pieces[size_t(k)], 0.0, xi) ==
            doctest::Approx(std::abs(part.psi_hat(k, xi))).epsilon(1e-14));
  }

  // random band-limited family reconstructs to 1e-10 at every lattice point
  SymbolClassParams fam{-0.5, 0.5, 0.5, 1, 1};
  Symbol sym = dyadic_modulation_symbol(fam, part.k_max - 1, 9, spec);
  auto sp = lp_pieces(sym, part);
  double worst = 0.0;
  for (int xi_i = 0; xi_i < spec.N; xi_i += 3) {
    double xi = spec.freq(xi_i);
    for (double x : {-5.0, 0.0, 2.0}) {
      cplx sum(0, 0);
      for (const auto& piece : sp) sum += eval_at(piece, x, xi);
      worst = std::max(worst, std::abs(sum - eval_at(sym, x, xi)));
    }
  }
  CHECK(worst <= 1e-10);

  // support arithmetic: a symbol confined to annulus 2 only hits pieces 1..3
  Symbol ann2 = multiplier_symbol(params, [](std::span<const double> xi) {
    return cplx(psi_hat_radial(std::ldexp(std::abs(xi[0]), -2)), 0.0);
  });
  auto ap = lp_pieces(ann2, part);
  bool p0_zero = true;
  for (double xi = 0.0; xi <= spec.nyquist(); xi += 0.05)
    if (eval_abs(ap[0], 0.0, xi) > 1e-15) p0_zero = false;
  CHECK(p0_zero);

  LpPartition bad = build_partition(spec, 2);
  CHECK_THROWS_AS(lp_pieces(sym, bad), std::invalid_argument);
}

TEST_CASE("piece bound: C00 of sigma_k against 2^{km} is k-independent") {
  GridSpec spec(1, 16.0, 4096);
  LpPartition part = build_partition(spec, 1);
  SymbolClassParams fam{-0.25, 0.5, 0.5, 1, 1};
  Symbol sym = dyadic_modulation_symbol(fam, part.k_max - 1, 3, spec);
  auto pieces = lp_pieces(sym, part);
  double lo = 1e300, hi = 0.0;
  for (int k = 1; k <= part.k_max - 1; ++k) {
    double sup = 0.0;
    for (double xi = 0.0; xi <= spec.nyquist(); xi += 0.01)
      sup = std::max(sup, eval_abs(pieces[size_t(k)], 0.2, xi));
    double scaled = sup / std::pow(2.0, k * fam.m);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  CHECK(hi / lo <= 8.0);
}

TEST_CASE("dilate_symbol: identity, endpoint, recertification, errors") {
  GridSpec spec(1, 16.0, 1024);
  LpPartition part = build_partition(spec, 1);
  SymbolClassParams fam{-0.5, 0.5, 0.5, 1, 1};
  Symbol sym = dyadic_modulation_symbol(fam, part.k_max - 1, 5, spec);
  auto pieces = lp_pieces(sym, part);
  const Symbol& piece = pieces[2];

  Symbol same = dilate_symbol(piece, 0.0, 2);
  CHECK(same.params().m == fam.m);
  CHECK(same.params().rho == fam.rho);
  for (double xi : {1.0, 2.5, 4.0})
    CHECK(eval_at(same, 0.7, xi) == eval_at(piece, 0.7, xi));

  Symbol endpoint = dilate_symbol(piece, fam.rho, 2);
  CHECK(endpoint.params().rho == 0.0);
  CHECK(endpoint.params().m == doctest::Approx(fam.m / (1.0 - fam.rho)));

  // lambda = 1/4: transformed class parameters per the dilation law
  Symbol mid = dilate_symbol(piece, 0.25, 2);
  CHECK(mid.params().m == doctest::Approx(fam.m / 0.75));
  CHECK(mid.params().rho == doctest::Approx((fam.rho - 0.25) / 0.75));
  SeminormReport rep = estimate_seminorms(mid, mid.params(), spec);
  CHECK(rep.pass);

  CHECK_THROWS_AS(dilate_symbol(piece, -0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(dilate_symbol(piece, fam.rho + 0.1, 2), std::invalid_argument);
}

TEST_CASE("multilinear family certifies against the (n,l) ceiling") {
  GridSpec spec(1, 16.0, 256);
  SymbolClassParams params{-0.5, 0.5, 0.5, 2, 1};
  Symbol s = dyadic_modulation_symbol(params, 1, 7, spec);
  SeminormReport rep = estimate_seminorms(s, params, spec, 2, default_seminorm_ceiling(1, 2));
  CHECK(rep.pass);
}
