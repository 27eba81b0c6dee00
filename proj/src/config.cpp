#include "maxharm/config.hpp"

#include "maxharm/symbol.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace maxharm {

namespace {

constexpr int kSchemaVersion = 1;

const std::set<std::string> kExperiments = {"theorem11",       "theorem14", "bmo_corollary",
                                            "theorem15",       "lebesgue_bounds",
                                            "kernel_decay",    "trace"};

void check_keys(const nlohmann::json& j, const std::string& section,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + section);
  }
}

double get_num(const nlohmann::json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return j[key].get<double>();
}

std::int64_t get_int(const nlohmann::json& j, const char* key, std::int64_t dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("key '") + key + "' must be an integer");
  return j[key].get<std::int64_t>();
}

std::vector<double> get_vec(const nlohmann::json& j, const char* key,
                            std::vector<double> dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(std::string("array '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double critical_order(const ExperimentConfig& c) {
  double nl = double(c.grid.n) * c.l;
  if (c.experiment == "bmo_corollary") return -(nl / 2.0) * (1.0 - c.rho);
  return -(nl / c.r) * (1.0 - c.rho);
}

void apply_experiment_defaults(ExperimentConfig& c) {
  if (c.experiment == "theorem11") {
    c.grid = GridSpec(1, 32.0, 512);
    c.l = 1;
    c.corpus_size = 24;
    c.dilation_sweep = {0.0, 0.32, 0.64, 0.96, 1.28, 1.6};
    c.modulation_sweep = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    c.translation_range = 2.0;
    c.modulation_range = 3.0;
    c.base_dilation_min = 0.7;  // keeps modulated spectra inside the symbol band
    c.base_dilation_range = 0.3;
  } else if (c.experiment == "theorem14") {
    c.grid = GridSpec(1, 16.0, 256);
    c.l = 2;
    c.corpus_size = 24;
    c.dilation_sweep = {0.0, 0.3, 0.6, 0.9, 1.2, 1.5};
    c.modulation_sweep = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    c.translation_range = 0.5;
    c.modulation_range = 2.5;
    c.base_dilation_range = 0.2;
  } else if (c.experiment == "bmo_corollary") {
    // band 8 so the sweep keeps the input spectra inside the symbol support
    c.grid = GridSpec(1, 16.0, 512);
    c.l = 2;
    c.corpus_size = 12;
    c.profiles = {"gaussian", "modulated"};
    c.dilation_sweep = {0.0, 0.35, 0.7, 1.05, 1.4, 1.75};
    c.modulation_sweep = {0.0, 0.3, 0.6, 0.9, 1.2, 1.5};
    c.translation_range = 1.0;
    c.modulation_range = 3.0;
    c.base_dilation_range = 0.25;
  } else if (c.experiment == "theorem15") {
    c.grid = GridSpec(1, 16.0, 256);
    c.l = 2;
    c.corpus_size = 12;
    c.dilation_sweep = {0.0};
    c.modulation_sweep = {0.0};
    c.translation_range = 1.0;
    c.modulation_range = 2.0;
    c.base_dilation_range = 0.25;
    c.p_vec = {4.0, 4.0};
    c.weight_powers = {0.25, -0.25};
  } else if (c.experiment == "lebesgue_bounds") {
    c.grid = GridSpec(1, 16.0, 2048);
    c.l = 2;
    c.rho = 0.125;
    c.delta = 0.125;
    c.corpus_size = 6;
    c.dilation_sweep = {0.0, 0.3, 0.6, 0.9, 1.2};
    c.modulation_sweep = {0.0};
    c.translation_range = 1.0;
    c.modulation_range = 2.0;
    c.base_dilation_range = 0.2;
  } else if (c.experiment == "kernel_decay") {
    c.grid = GridSpec(1, 16.0, 4096);
    c.l = 1;
    c.corpus_size = 0;
  } else if (c.experiment == "trace") {
    c.l = 2;
    c.grid = GridSpec(1, 16.0, 512);
    c.corpus_size = 10;
    c.modulation_sweep = {0.0, 1.0, 2.0, 3.0};
    c.aniso_max = 8.0;
  }
}

int auto_symbol_k(const ExperimentConfig& c) {
  int k_grid = int(std::floor(std::log2(c.grid.nyquist()))) - 2;
  int k_mod = c.rho > 0
                  ? int(std::floor(std::log2(kTwoPi * c.grid.nyquist() * 0.99) / c.rho))
                  : k_grid;
  return std::max(1, std::min(k_grid, k_mod));
}

void validate(ExperimentConfig& c) {
  if (!kExperiments.count(c.experiment)) {
    std::string ids;
    for (const auto& e : kExperiments) ids += (ids.empty() ? "" : ", ") + e;
    throw ConfigError("unknown experiment '" + c.experiment + "' (known: " + ids + ")");
  }
  try {
    c.grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  if (!(c.rho > 0.0 && c.rho < 1.0)) throw ConfigError("rho in (0,1) required");
  if (!(c.delta >= 0.0 && c.delta <= c.rho)) throw ConfigError("delta in [0, rho] required");
  if (c.experiment != "trace") {
    if (!(c.r > 1.0 && c.r <= 2.0)) throw ConfigError("r in (1,2] required");
    if (c.grid.nyquist() < 8.0)
      throw ConfigError("grid must resolve 3 dyadic annuli: N/(2L) >= 8 required");
  }

  const bool uses_sharp = c.experiment == "theorem11" || c.experiment == "theorem14" ||
                          c.experiment == "theorem15";
  if (uses_sharp && c.grid.h() > 1.0 / 16.0 + 1e-12)
    throw ConfigError("grid must resolve side 1 with >= 16 cells (h <= 1/16)");

  if (c.experiment == "theorem11" || c.experiment == "kernel_decay") {
    if (c.l != 1) throw ConfigError(c.experiment + " requires l = 1");
  }
  if (c.experiment == "theorem14") {
    if (c.l < 1 || c.l > 2) throw ConfigError("theorem14 requires l in {1,2}");
  }
  if (c.experiment == "bmo_corollary" || c.experiment == "theorem15" ||
      c.experiment == "lebesgue_bounds") {
    if (c.l < 1 || c.l > 3) throw ConfigError(c.experiment + " requires l in 1..3");
  }
  if (c.corpus_size < 0) throw ConfigError("corpus size must be nonnegative");
  if (c.budget_seconds < 0) throw ConfigError("budget_seconds must be nonnegative");

  if (c.experiment == "trace") {
    if (c.l != 2 && c.l != 3) throw ConfigError("trace requires l in {2,3} (memory guard)");
    if (!(c.trace_s > 0)) throw ConfigError("trace requires s > 0");
    if (c.modulation_sweep.size() < 3)
      throw ConfigError("trace requires a modulation sweep with >= 3 steps");
    if (c.corpus_size < 2) throw ConfigError("trace requires corpus size >= 2");
    if (!(c.aniso_max > 1.0)) throw ConfigError("trace requires aniso_max > 1");
    return;  // trace has no symbol/exponent constraints beyond these
  }

  // critical order (the constant family is the order-0 sanity case)
  double mc = c.symbol_family == "constant" ? 0.0 : critical_order(c);
  if (std::isnan(c.m)) c.m = mc;
  if (std::abs(c.m - mc) > 1e-9) {
    std::ostringstream os;
    os << "m must equal the critical order for experiment " << c.experiment << ": expected "
       << mc << ", got " << c.m;
    throw ConfigError(os.str());
  }

  if (c.symbol_family == "constant") {
    if (c.m != 0.0) throw ConfigError("constant symbol family requires m = 0");
  } else if (c.symbol_family == "oscillatory") {
    if (c.l != 1) throw ConfigError("oscillatory symbol family requires l = 1");
  } else if (c.symbol_family != "dyadic_modulation") {
    throw ConfigError("unknown symbol family '" + c.symbol_family + "'");
  }

  if (c.K == 0) c.K = auto_symbol_k(c);
  if (c.symbol_seed == 0) c.symbol_seed = c.seed ^ 0x5ca1ab1eULL;
  if (c.seminorm_ceiling == 0.0)
    c.seminorm_ceiling = default_seminorm_ceiling(c.grid.n, c.l, c.rho);

  for (const auto& p : c.profiles) profile_from_string(p);  // throws on unknown

  if (c.experiment == "theorem15") {
    if (int(c.p_vec.size()) != c.l) throw ConfigError("theorem15 requires one exponent per slot");
    for (double pj : c.p_vec)
      if (!(pj > c.r)) throw ConfigError("theorem15 requires r < p_j for every j");
    if (int(c.weight_powers.size()) != c.l)
      throw ConfigError("theorem15 requires one weight power per slot");
  }

  if (c.experiment == "lebesgue_bounds") {
    double lo = (2.0 * c.rho * c.l - c.r) / (2.0 * c.l - c.r);
    if (c.rho >= c.r / (2.0 * c.l)) {
      if (c.lambda < 0) c.lambda = (std::max(lo, 0.0) + c.rho) / 2.0;
      if (!(c.lambda > lo && c.lambda < c.rho)) {
        std::ostringstream os;
        os << "lambda must lie in (" << lo << ", " << c.rho << ") for this (rho, r, l)";
        throw ConfigError(os.str());
      }
    }
  }

  if (c.experiment == "kernel_decay") {
    int k_part = int(std::floor(std::log2(c.grid.nyquist()))) - 1;
    if (c.k_max_sweep > k_part)
      throw ConfigError("kernel sweep exceeds the grid: k_max " + std::to_string(c.k_max_sweep) +
                        " > resolvable " + std::to_string(k_part));
    if (c.k_max_sweep - c.k_min + 1 < 3)
      throw ConfigError("insufficient k range for a slope fit (need >= 3 points)");
    if (c.decay_order == 0.0)
      c.decay_order = double(c.grid.n) * c.l / c.r + std::min(1.0 / (2.0 * c.rho), 3.0);
  }
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = {
      {"theorem11",
       "linear pointwise bound: inhomogeneous L^r sharp maximal of T_sigma f vs M_r f",
       "experiment; optional: grid, symbol, corpus, exponents.r, tolerances"},
      {"theorem14",
       "multilinear pointwise bound: L^{r/l} sharp maximal of T_sigma(f_1..f_l) vs M_r(f_1..f_l)",
       "experiment; optional: grid, symbol (l=2), corpus, exponents.r, tolerances"},
      {"bmo_corollary",
       "L^inf x ... x L^inf -> BMO bound for T_sigma at m = -(nl/2)(1-rho)",
       "experiment; optional: grid, symbol, corpus, exponents.t, tolerances"},
      {"theorem15",
       "weighted norm inequality with multilinear A_p weights, plus the maximal-function and "
       "power-embedding sub-checks",
       "experiment; optional: grid, symbol, corpus, exponents.{r,p}, weights.powers, tolerances"},
      {"lebesgue_bounds",
       "Lebesgue mapping bounds: L^r x..x L^r -> L^{r/(l rho)} (small rho) or per-piece growth "
       "rates (large rho)",
       "experiment; optional: grid, symbol, corpus, exponents.{r,lambda}, tolerances"},
      {"kernel_decay",
       "weighted kernel norm decay slopes across dyadic pieces, three variants",
       "experiment; optional: grid, symbol, exponents.r, kernel.{k_min,k_max,base_points}"},
      {"trace",
       "diagonal-restriction Sobolev trace ratios over anisotropy and modulation sweeps",
       "experiment; optional: grid, symbol.l (2 or 3), trace.{s,aniso_max}, corpus"},
  };
  return catalog;
}

ExperimentConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(j, "config root",
             {"schema_version", "experiment", "seed", "grid", "symbol", "corpus", "exponents",
              "cubes", "weights", "tolerances", "kernel", "trace", "budget_seconds", "threads"});

  if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
  if (get_int(j, "schema_version", -1) != kSchemaVersion)
    throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) +
                      ")");
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw ConfigError("missing experiment id");

  ExperimentConfig c;
  c.experiment = j["experiment"].get<std::string>();
  if (!kExperiments.count(c.experiment)) {
    std::string ids;
    for (const auto& e : kExperiments) ids += (ids.empty() ? "" : ", ") + e;
    throw ConfigError("unknown experiment '" + c.experiment + "' (known: " + ids + ")");
  }
  apply_experiment_defaults(c);

  c.seed = std::uint64_t(get_int(j, "seed", 1));

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, "grid", {"n", "L", "N"});
    c.grid = GridSpec();
    c.grid.n = int(get_int(g, "n", c.grid.n));
    c.grid.L = get_num(g, "L", c.grid.L);
    c.grid.N = int(get_int(g, "N", c.grid.N));
  }

  c.m = std::nan("");
  if (j.contains("symbol")) {
    const auto& s = j["symbol"];
    check_keys(s, "symbol", {"family", "m", "rho", "delta", "l", "K", "seed"});
    if (s.contains("family")) c.symbol_family = s["family"].get<std::string>();
    c.m = get_num(s, "m", std::nan(""));
    c.rho = get_num(s, "rho", c.rho);
    c.delta = get_num(s, "delta", c.rho);
    c.l = int(get_int(s, "l", c.l));
    c.K = int(get_int(s, "K", 0));
    c.symbol_seed = std::uint64_t(get_int(s, "seed", 0));
  } else {
    c.delta = c.rho;
  }

  bool modulation_sweep_given = false;
  if (j.contains("corpus")) {
    const auto& co = j["corpus"];
    modulation_sweep_given = co.contains("modulation_sweep");
    check_keys(co, "corpus",
               {"size", "profiles", "dilation_sweep", "modulation_sweep", "translation_range",
                "modulation_range", "base_dilation_range", "base_dilation_min"});
    c.corpus_size = int(get_int(co, "size", c.corpus_size));
    if (co.contains("profiles")) {
      c.profiles.clear();
      for (const auto& p : co["profiles"]) c.profiles.push_back(p.get<std::string>());
      if (c.profiles.empty()) throw ConfigError("corpus.profiles must not be empty");
    }
    c.dilation_sweep = get_vec(co, "dilation_sweep", c.dilation_sweep);
    c.modulation_sweep = get_vec(co, "modulation_sweep", c.modulation_sweep);
    c.translation_range = get_num(co, "translation_range", c.translation_range);
    c.modulation_range = get_num(co, "modulation_range", c.modulation_range);
    c.base_dilation_range = get_num(co, "base_dilation_range", c.base_dilation_range);
    c.base_dilation_min = get_num(co, "base_dilation_min", c.base_dilation_min);
  }

  if (j.contains("exponents")) {
    const auto& e = j["exponents"];
    check_keys(e, "exponents", {"r", "p", "t", "lambda"});
    c.r = get_num(e, "r", c.r);
    c.p_vec = get_vec(e, "p", c.p_vec);
    c.t = get_num(e, "t", 2.0 / c.l);
    c.lambda = get_num(e, "lambda", -1.0);
  } else {
    c.t = 2.0 / c.l;
  }

  if (j.contains("cubes")) {
    const auto& cu = j["cubes"];
    check_keys(cu, "cubes", {"dense_max_cells", "stride_divisor"});
    c.dense_max_cells = int(get_int(cu, "dense_max_cells", c.dense_max_cells));
    c.stride_divisor = int(get_int(cu, "stride_divisor", c.stride_divisor));
  }

  if (j.contains("weights")) {
    const auto& w = j["weights"];
    check_keys(w, "weights", {"powers"});
    c.weight_powers = get_vec(w, "powers", c.weight_powers);
  }

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    check_keys(t, "tolerances",
               {"slope", "residual_band", "mask_rel", "ap_ceiling", "refine", "seminorm_ceiling",
                "kernel_slope_margin", "trace_ratio_band"});
    c.slope_tol = get_num(t, "slope", c.slope_tol);
    c.residual_tol = get_num(t, "residual_band", c.residual_tol);
    c.mask_rel = get_num(t, "mask_rel", c.mask_rel);
    c.ap_ceiling = get_num(t, "ap_ceiling", c.ap_ceiling);
    c.refine_tol = get_num(t, "refine", c.refine_tol);
    c.seminorm_ceiling = get_num(t, "seminorm_ceiling", c.seminorm_ceiling);
    c.kernel_slope_margin = get_num(t, "kernel_slope_margin", c.kernel_slope_margin);
    c.trace_ratio_band = get_num(t, "trace_ratio_band", c.trace_ratio_band);
  }

  if (j.contains("kernel")) {
    const auto& k = j["kernel"];
    check_keys(k, "kernel", {"k_min", "k_max", "base_points", "decay_order"});
    c.k_min = int(get_int(k, "k_min", c.k_min));
    c.k_max_sweep = int(get_int(k, "k_max", c.k_max_sweep));
    c.base_points = int(get_int(k, "base_points", c.base_points));
    c.decay_order = get_num(k, "decay_order", 0.0);
  }

  if (j.contains("trace")) {
    const auto& t = j["trace"];
    check_keys(t, "trace", {"s", "aniso_max", "l"});
    c.trace_s = get_num(t, "s", c.trace_s);
    c.aniso_max = get_num(t, "aniso_max", c.aniso_max);
    if (t.contains("l")) c.l = int(get_int(t, "l", c.l));
    if (c.experiment == "trace" && c.l == 3) {
      if (!j.contains("grid")) c.grid = GridSpec(1, 8.0, 128);
      // the diagonal carries l times the factor modulation; keep it resolvable
      if (!modulation_sweep_given) c.modulation_sweep = {0.0, 0.5, 1.0, 1.5};
    }
  }

  c.budget_seconds = get_num(j, "budget_seconds", 0.0);
  c.threads = int(get_int(j, "threads", 0));

  validate(c);
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // translate byte offset into line/column
    size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  return parse_config_json(j);
}

nlohmann::json resolved_config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["grid"] = {{"n", c.grid.n}, {"L", c.grid.L}, {"N", c.grid.N}};
  j["symbol"] = {{"family", c.symbol_family}, {"m", c.m},         {"rho", c.rho},
                 {"delta", c.delta},          {"l", c.l},         {"K", c.K},
                 {"seed", c.symbol_seed}};
  j["corpus"] = {{"size", c.corpus_size},
                 {"profiles", c.profiles},
                 {"dilation_sweep", c.dilation_sweep},
                 {"modulation_sweep", c.modulation_sweep},
                 {"translation_range", c.translation_range},
                 {"modulation_range", c.modulation_range},
                 {"base_dilation_range", c.base_dilation_range},
                 {"base_dilation_min", c.base_dilation_min}};
  j["exponents"] = {{"r", c.r}, {"p", c.p_vec}, {"t", c.t}, {"lambda", c.lambda}};
  j["cubes"] = {{"dense_max_cells", c.dense_max_cells}, {"stride_divisor", c.stride_divisor}};
  j["weights"] = {{"powers", c.weight_powers}};
  j["tolerances"] = {{"slope", c.slope_tol},
                     {"residual_band", c.residual_tol},
                     {"mask_rel", c.mask_rel},
                     {"ap_ceiling", c.ap_ceiling},
                     {"refine", c.refine_tol},
                     {"seminorm_ceiling", c.seminorm_ceiling},
                     {"kernel_slope_margin", c.kernel_slope_margin},
                     {"trace_ratio_band", c.trace_ratio_band}};
  j["kernel"] = {{"k_min", c.k_min},
                 {"k_max", c.k_max_sweep},
                 {"base_points", c.base_points},
                 {"decay_order", c.decay_order}};
  j["trace"] = {{"s", c.trace_s}, {"aniso_max", c.aniso_max}, {"l", c.l}};
  j["budget_seconds"] = c.budget_seconds;
  return j;
}

}  // namespace maxharm
