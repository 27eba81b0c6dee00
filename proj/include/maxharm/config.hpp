#pragma once

#include <json.hpp>

#include "maxharm/experiments.hpp"

namespace maxharm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentInfo {
  std::string id;
  std::string summary;
  std::string required_keys;
};

/// Catalog of experiment ids, what each one verifies, and required keys.
const std::vector<ExperimentInfo>& experiment_catalog();

/// Parse and fully validate a config file. Fills per-experiment defaults,
/// rejects unknown keys, and checks every module-level precondition eagerly.
/// Throws ConfigError with line/column on parse errors and with the violated
/// constraint on validation errors.
ExperimentConfig parse_config(const std::string& path);

/// Same, from an in-memory JSON document.
ExperimentConfig parse_config_json(const nlohmann::json& j);

/// The fully resolved configuration as embedded in every report.
nlohmann::json resolved_config_json(const ExperimentConfig& cfg);

}  // namespace maxharm
