#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "maxharm/config.hpp"
#include "maxharm/parallel.hpp"

namespace fs = std::filesystem;
using namespace maxharm;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int resolve_threads(int flag_threads, bool flag_given, int config_threads) {
  if (flag_given) return flag_threads;
  if (const char* env = std::getenv("MAXHARM_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
    }
  }
  return config_threads;
}

int do_run(const std::string& config_path, const std::string& out_dir, bool dry_run,
           bool seed_given, std::uint64_t seed, bool threads_given, int threads) {
  ExperimentConfig cfg;
  try {
    if (seed_given) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
      nlohmann::json j = nlohmann::json::parse(in);
      j["seed"] = seed;
      cfg = parse_config_json(j);
    } else {
      cfg = parse_config(config_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  if (dry_run) {
    std::cout << "config OK: experiment=" << cfg.experiment << " grid N=" << cfg.grid.N
              << " L=" << cfg.grid.L << " seed=" << cfg.seed << "\n";
    return 0;
  }

  set_thread_count(resolve_threads(threads, threads_given, cfg.threads));

  RatioReport report;
  try {
    report = run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "execution error: " << e.what() << "\n";
    return 1;
  }

  try {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", report_to_json(report).dump(2) + "\n");
    write_file(fs::path(out_dir) / "ratios.csv", ratios_csv(report));
    write_file(fs::path(out_dir) / "slopes.csv", slopes_csv(report));
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 1;
  }

  std::cout << "experiment " << report.experiment << (report.pass ? ": PASS" : ": FAIL")
            << (report.partial ? " (partial)" : "") << "\n";
  for (const auto& reason : report.reasons) std::cout << "  - " << reason << "\n";
  for (const auto& sc : report.sub_checks)
    std::cout << "  [" << (sc.pass ? "ok" : "FAIL") << "] " << sc.name << " = "
              << format_double(sc.value) << "\n";
  if (!report.sup_ratio_per_sweep.empty()) {
    std::cout << "  sup ratio per sweep:";
    for (double v : report.sup_ratio_per_sweep) std::cout << " " << format_double(v);
    std::cout << "\n";
  }
  std::cout << "  runtime: " << format_double(report.runtime_seconds) << " s\n";
  if (report.partial) return 3;
  return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxharm: ratio and scaling experiments for maximal-function bounds on "
               "pseudo-differential operators"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "maxharm_out";
  std::uint64_t seed = 0;
  int threads = 0;
  bool dry_run = false;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "JSON config path")->required();
  run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  auto* thr_opt = run->add_option("--threads", threads, "worker count (0 = auto)");
  run->add_flag("--dry-run", dry_run, "validate only, write nothing");

  auto* list = app.add_subcommand("list", "list experiments");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", validate_path, "JSON config path")->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& info : experiment_catalog()) {
      std::cout << info.id << "\n  " << info.summary << "\n  keys: " << info.required_keys
                << "\n";
    }
    return 0;
  }
  if (validate->parsed()) {
    return do_run(validate_path, out_dir, /*dry_run=*/true, false, 0, false, 0);
  }
  return do_run(config_path, out_dir, dry_run, seed_opt->count() > 0, seed,
                thr_opt->count() > 0, threads);
}
