#include <doctest.h>

#include "maxharm/config.hpp"
#include "maxharm/maximal.hpp"
#include "maxharm/operators.hpp"
#include "maxharm/parallel.hpp"
#include "maxharm/weights.hpp"

using namespace maxharm;

namespace {

ExperimentConfig small_config(const std::string& experiment, int corpus,
                              nlohmann::json extra = {}) {
  nlohmann::json j = {{"schema_version", 1},
                      {"experiment", experiment},
                      {"seed", 3},
                      {"corpus", {{"size", corpus}}}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return parse_config_json(j);
}

}  // namespace

TEST_CASE("identity symbol: sharp-to-maximal ratio stays below 2") {
  ExperimentConfig cfg = small_config(
      "theorem11", 4, {{"symbol", {{"family", "constant"}, {"m", 0.0}, {"rho", 0.5}}}});
  RatioReport rep = run_linear_sharp(cfg);
  CHECK(rep.pass);
  for (const auto& row : rep.cases) {
    CHECK(!row.skipped);
    CHECK(row.ratio <= 2.0);
  }
}

TEST_CASE("theorem11: report structure, masking accounting, tails") {
  ExperimentConfig cfg = small_config("theorem11", 5);
  RatioReport rep = run_linear_sharp(cfg);
  CHECK(rep.pass);
  CHECK(rep.cases.size() == cfg.dilation_sweep.size() * size_t(cfg.corpus_size));
  CHECK(rep.sup_ratio_per_sweep.size() == cfg.dilation_sweep.size());
  CHECK(rep.total_points > 0);
  CHECK(rep.excluded_points * 2 <= rep.total_points);
  CHECK(rep.max_tail_mass <= 1e-6);
  REQUIRE(rep.fits.size() == 1);
  CHECK(rep.fits[0].slope <= cfg.slope_tol);
  CHECK(rep.fits[0].residual_band <= cfg.residual_tol);
  for (const auto& row : rep.cases) CHECK(std::isfinite(row.ratio));
}

TEST_CASE("the l = 1 multilinear engine reproduces the linear experiment") {
  ExperimentConfig cfg = small_config("theorem14", 4, {{"symbol", {{"rho", 0.5}, {"l", 1}}}});
  ExperimentConfig lin = cfg;
  RatioReport a = run_multilinear_sharp(cfg);
  lin.experiment = "theorem11";
  RatioReport b = run_linear_sharp(lin);
  REQUIRE(a.cases.size() == b.cases.size());
  for (size_t i = 0; i < a.cases.size(); ++i)
    CHECK(std::abs(a.cases[i].ratio - b.cases[i].ratio) <= 1e-10 * (1 + b.cases[i].ratio));
}

TEST_CASE("corpus members are deterministic in (seed, case, slot)") {
  ExperimentConfig cfg = small_config("theorem14", 4);
  TestFunctionSpec a = corpus_member(cfg, 2, 1);
  TestFunctionSpec b = corpus_member(cfg, 2, 1);
  CHECK(a.dilation_log2 == b.dilation_log2);
  CHECK(a.x0[0] == b.x0[0]);
  CHECK(a.v[0] == b.v[0]);
  TestFunctionSpec c = corpus_member(cfg, 3, 1);
  CHECK(a.v[0] != c.v[0]);
}

TEST_CASE("reports are byte-identical across worker counts") {
  ExperimentConfig cfg = small_config("theorem11", 4);
  set_thread_count(1);
  RatioReport a = run_linear_sharp(cfg);
  set_thread_count(3);
  RatioReport b = run_linear_sharp(cfg);
  set_thread_count(0);
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());
}

TEST_CASE("budget exhaustion yields a flagged partial report") {
  ExperimentConfig cfg = small_config("theorem11", 4);
  cfg.budget_seconds = 1e-9;
  RatioReport rep = run_linear_sharp(cfg);
  CHECK(rep.partial);
  CHECK_FALSE(rep.reasons.empty());
}

TEST_CASE("bmo corollary: homogeneity of the ratio in each slot") {
  // scaling f_1 by 10 scales both sides linearly
  GridSpec spec(1, 16.0, 256);
  SymbolClassParams bil{-0.5, 0.5, 0.5, 2, 1};
  Symbol sigma = dyadic_modulation_symbol(bil, 1, 5, spec);
  CubeFamily fam = CubeFamily::standard(spec);
  TestFunctionSpec t1;
  TestFunctionSpec t2;
  t2.v[0] = 1.0;
  GridFunction f1 = test_function(spec, t1), f2 = test_function(spec, t2);
  GridFunction f1s(spec, Domain::Spatial, 10.0 * f1.values());
  std::vector<GridFunction> a{f1, f2};
  std::vector<GridFunction> b{f1s, f2};
  double r1 = bmo_seminorm(apply_multilinear(sigma, a), fam, 1.0) /
              (lp_norm(f1, std::numeric_limits<double>::infinity()) *
               lp_norm(f2, std::numeric_limits<double>::infinity()));
  double r2 = bmo_seminorm(apply_multilinear(sigma, b), fam, 1.0) /
              (lp_norm(f1s, std::numeric_limits<double>::infinity()) *
               lp_norm(f2, std::numeric_limits<double>::infinity()));
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-9));
}

TEST_CASE("bmo corollary runner verdict on a reduced corpus") {
  ExperimentConfig cfg = small_config("bmo_corollary", 8);
  RatioReport rep = run_bmo_corollary(cfg);
  CHECK(rep.pass);
  for (const auto& row : rep.cases) CHECK(row.ratio >= 0.0);
}

TEST_CASE("weighted runner: sub-checks, refinement rows, ceiling enforcement") {
  ExperimentConfig cfg = small_config("theorem15", 3);
  RatioReport rep = run_weighted(cfg);
  CHECK(rep.pass);
  std::vector<std::string> need{"multilinear_ap_constant",
                                "product_weight_ap_constant",
                                "dyadic_vs_sharp",
                                "t_power_embedding",
                                "operator_ratio_refinement_stability",
                                "maximal_ratio_refinement_stability",
                                "operator_ratio_finite",
                                "maximal_ratio_finite"};
  for (const auto& name : need) {
    bool found = false;
    for (const auto& sc : rep.sub_checks)
      if (sc.name == name) {
        found = true;
        CHECK_MESSAGE(sc.pass, name);
      }
    CHECK_MESSAGE(found, name);
  }
  // rows for base and refined grids
  bool base = false, refined = false;
  for (const auto& row : rep.cases) {
    if (row.sweep_k == 0) base = true;
    if (row.sweep_k == 1) refined = true;
  }
  CHECK(base);
  CHECK(refined);

  ExperimentConfig strict = cfg;
  strict.ap_ceiling = 1e-3;
  RatioReport rep2 = run_weighted(strict);
  CHECK_FALSE(rep2.pass);
}

TEST_CASE("lebesgue bounds: mode A dispatch and verdict") {
  ExperimentConfig cfg = small_config("lebesgue_bounds", 3);
  REQUIRE(cfg.rho < cfg.r / (2.0 * cfg.l));
  RatioReport rep = run_lebesgue_bounds(cfg);
  CHECK(rep.pass);
  for (const auto& row : rep.cases) CHECK(std::isfinite(row.ratio));
}

TEST_CASE("lebesgue bounds: mode B residual fit") {
  ExperimentConfig cfg = small_config(
      "lebesgue_bounds", 3,
      {{"symbol", {{"rho", 0.75}, {"l", 2}}}, {"exponents", {{"r", 2.0}, {"lambda", 0.6}}}});
  REQUIRE(cfg.rho >= cfg.r / (2.0 * cfg.l));
  RatioReport rep = run_lebesgue_bounds(cfg);
  CHECK(rep.pass);
  REQUIRE(rep.fits.size() == 1);
  CHECK(rep.fits[0].series == "piece_residual");
  CHECK(rep.fits[0].slope <= cfg.kernel_slope_margin);
}

TEST_CASE("kernel decay runner: fits per variant and base point") {
  ExperimentConfig cfg = small_config(
      "kernel_decay", 0,
      {{"grid", {{"n", 1}, {"L", 16.0}, {"N", 1024}}},
       {"kernel", {{"k_min", 1}, {"k_max", 3}, {"base_points", 2}}}});
  RatioReport rep = run_kernel_decay(cfg);
  CHECK(rep.pass);
  CHECK(rep.cases.size() == 3 * 2 * 3);  // k values x base points x variants
  CHECK(rep.fits.size() == 6);           // variants x base points
  for (const auto& fit : rep.fits) CHECK(fit.slope <= cfg.kernel_slope_margin);
}

TEST_CASE("trace runner: band and collapse sub-checks") {
  ExperimentConfig cfg = small_config("trace", 4);
  RatioReport rep = run_trace(cfg);
  CHECK(rep.pass);
  bool band = false, collapse = false;
  for (const auto& sc : rep.sub_checks) {
    if (sc.name == "trace_ratio_band") {
      band = true;
      CHECK(sc.value <= cfg.trace_ratio_band);
    }
    if (sc.name == "iterated_collapse") {
      collapse = true;
      CHECK(sc.value <= 1e-12);
    }
  }
  CHECK(band);
  CHECK(collapse);
}

TEST_CASE("dispatcher rejects unknown ids") {
  ExperimentConfig cfg = small_config("theorem11", 4);
  cfg.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}
