#pragma once

#include "maxharm/grid.hpp"
#include "maxharm/report.hpp"

namespace maxharm {

/// Fully resolved experiment configuration. parse_config (config.hpp) fills
/// per-experiment defaults and validates every module-level precondition
/// before a runner ever sees the struct.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;

  GridSpec grid;

  // symbol family
  std::string symbol_family = "dyadic_modulation";
  double m = 0.0;
  double rho = 0.5;
  double delta = 0.5;
  int l = 1;
  int K = 0;  // 0 = auto (largest admissible)
  std::uint64_t symbol_seed = 0;  // 0 = derived from seed

  // corpus
  int corpus_size = 24;
  std::vector<std::string> profiles{"gaussian", "bump", "modulated"};
  std::vector<double> dilation_sweep;
  std::vector<double> modulation_sweep;
  double translation_range = 2.0;
  double modulation_range = 3.0;
  double base_dilation_range = 0.5;
  double base_dilation_min = 0.0;

  // exponents
  double r = 2.0;
  std::vector<double> p_vec;
  double t = 1.0;
  double lambda = -1.0;  // lebesgue mode B; -1 = interval midpoint
  double trace_s = 0.5;

  // cube family
  int dense_max_cells = 32;
  int stride_divisor = 8;

  // weights (power family)
  std::vector<double> weight_powers;

  // tolerances, all pinned here
  double slope_tol = 0.1;
  double residual_tol = 0.2;
  double mask_rel = 1e-8;
  double ap_ceiling = 10.0;
  double refine_tol = 0.2;
  double seminorm_ceiling = 0.0;  // 0 = auto by (n, l)
  double kernel_slope_margin = 0.15;
  double trace_ratio_band = 10.0;

  // kernel decay sweep
  int k_min = 1;
  int k_max_sweep = 6;
  int base_points = 4;
  double decay_order = 0.0;  // 0 = auto: nl/r + min(1/(2 rho), 3)

  // trace corpus
  double aniso_max = 8.0;

  double budget_seconds = 0.0;  // 0 = unlimited
  int threads = 0;
};

RatioReport run_linear_sharp(const ExperimentConfig& cfg);
RatioReport run_multilinear_sharp(const ExperimentConfig& cfg);
RatioReport run_bmo_corollary(const ExperimentConfig& cfg);
RatioReport run_weighted(const ExperimentConfig& cfg);
RatioReport run_lebesgue_bounds(const ExperimentConfig& cfg);
RatioReport run_kernel_decay(const ExperimentConfig& cfg);
RatioReport run_trace(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment.
RatioReport run_experiment(const ExperimentConfig& cfg);

/// Deterministic corpus member for (seed, case index, slot).
TestFunctionSpec corpus_member(const ExperimentConfig& cfg, int case_index, int slot);

}  // namespace maxharm
