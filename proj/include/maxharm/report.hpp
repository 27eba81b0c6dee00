#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace maxharm {

struct SlopeFit {
  std::string series;
  double slope = 0;
  double intercept = 0;
  double residual_band = 0;  // max |residual| of the fit
  double slope_stderr = 0;
  int points = 0;
};

/// Least squares of log2(value) against k. Requires >= 3 points and positive
/// values.
SlopeFit fit_log_slope(const std::string& series, std::span<const double> k,
                       std::span<const double> values);

struct CaseRow {
  std::string case_id;
  int sweep_k = 0;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  bool skipped = false;
};

struct SubCheck {
  std::string name;
  bool pass = false;
  double value = 0;
  std::string note;
};

struct RatioReport {
  std::string experiment;
  nlohmann::json resolved_config;
  std::vector<CaseRow> cases;
  std::vector<double> sup_ratio_per_sweep;
  std::vector<SlopeFit> fits;
  std::vector<SubCheck> sub_checks;
  std::int64_t excluded_points = 0;
  std::int64_t total_points = 0;
  double max_tail_mass = 0;
  bool pass = false;
  bool partial = false;
  std::vector<std::string> reasons;
  std::uint64_t seed = 0;
  // wall-clock; reported on stdout only so report files stay byte-identical
  // across thread counts
  double runtime_seconds = 0;
};

/// Full report (minus wall-clock) with sorted keys; byte-identical for a
/// fixed (config, seed, artifact version).
nlohmann::json report_to_json(const RatioReport& r);

/// case_id,sweep_k,lhs,rhs,ratio
std::string ratios_csv(const RatioReport& r);

/// series,slope,intercept,residual_band,slope_stderr,points
std::string slopes_csv(const RatioReport& r);

std::string format_double(double v);

}  // namespace maxharm
