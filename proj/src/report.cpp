#include "maxharm/report.hpp"

#include <cmath>
#include <cstdio>

#include "maxharm/util.hpp"

namespace maxharm {

SlopeFit fit_log_slope(const std::string& series, std::span<const double> k,
                       std::span<const double> values) {
  require(k.size() == values.size(), "fit_log_slope: length mismatch");
  require(k.size() >= 3, "fit_log_slope: need at least 3 points");
  for (double v : values)
    require(v > 0 && std::isfinite(v), "fit_log_slope: values must be positive and finite");

  const int n = int(k.size());
  double kbar = 0, ybar = 0;
  std::vector<double> y(values.size());
  for (int i = 0; i < n; ++i) {
    y[size_t(i)] = std::log2(values[size_t(i)]);
    kbar += k[size_t(i)];
    ybar += y[size_t(i)];
  }
  kbar /= n;
  ybar /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (k[size_t(i)] - kbar) * (k[size_t(i)] - kbar);
    sxy += (k[size_t(i)] - kbar) * (y[size_t(i)] - ybar);
  }
  require(sxx > 0, "fit_log_slope: degenerate abscissae");

  SlopeFit fit;
  fit.series = series;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * kbar;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    double r = y[size_t(i)] - (fit.intercept + fit.slope * k[size_t(i)]);
    fit.residual_band = std::max(fit.residual_band, std::abs(r));
    ss += r * r;
  }
  if (n > 2) fit.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  return fit;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json report_to_json(const RatioReport& r) {
  nlohmann::json j;
  j["artifact_version"] = kArtifactVersion;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["resolved_config"] = r.resolved_config;
  j["pass"] = r.pass;
  j["partial"] = r.partial;
  j["reasons"] = r.reasons;
  j["excluded_points"] = r.excluded_points;
  j["total_points"] = r.total_points;
  j["max_tail_mass"] = r.max_tail_mass;
  j["sup_ratio_per_sweep"] = r.sup_ratio_per_sweep;

  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) {
    cases.push_back({{"case_id", c.case_id},
                     {"sweep_k", c.sweep_k},
                     {"lhs", c.lhs},
                     {"rhs", c.rhs},
                     {"ratio", c.ratio},
                     {"skipped", c.skipped}});
  }
  j["cases"] = cases;

  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"series", f.series},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"residual_band", f.residual_band},
                    {"slope_stderr", f.slope_stderr},
                    {"band95", 1.96 * f.slope_stderr},
                    {"points", f.points}});
  }
  j["fits"] = fits;

  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : r.sub_checks) {
    subs.push_back({{"name", s.name}, {"pass", s.pass}, {"value", s.value}, {"note", s.note}});
  }
  j["sub_checks"] = subs;
  return j;
}

std::string ratios_csv(const RatioReport& r) {
  std::string out = "case_id,sweep_k,lhs,rhs,ratio\n";
  for (const auto& c : r.cases) {
    out += c.case_id;
    out += ',';
    out += std::to_string(c.sweep_k);
    out += ',';
    out += format_double(c.lhs);
    out += ',';
    out += format_double(c.rhs);
    out += ',';
    out += format_double(c.ratio);
    out += '\n';
  }
  return out;
}

std::string slopes_csv(const RatioReport& r) {
  std::string out = "series,slope,intercept,residual_band,slope_stderr,points\n";
  for (const auto& f : r.fits) {
    out += f.series;
    out += ',';
    out += format_double(f.slope);
    out += ',';
    out += format_double(f.intercept);
    out += ',';
    out += format_double(f.residual_band);
    out += ',';
    out += format_double(f.slope_stderr);
    out += ',';
    out += std::to_string(f.points);
    out += '\n';
  }
  return out;
}

}  // namespace maxharm
