#include <doctest.h>

#include <fstream>

#include "maxharm/config.hpp"

using namespace maxharm;

namespace {

nlohmann::json minimal(const std::string& experiment) {
  return {{"schema_version", 1}, {"experiment", experiment}};
}

}  // namespace

TEST_CASE("minimal theorem11 config fills the documented defaults") {
  ExperimentConfig cfg = parse_config_json(minimal("theorem11"));
  CHECK(cfg.grid.N == 512);
  CHECK(cfg.grid.L == 32.0);
  CHECK(cfg.grid.n == 1);
  CHECK(cfg.corpus_size == 24);
  CHECK(cfg.r == 2.0);
  CHECK(cfg.rho == 0.5);
  CHECK(cfg.m == doctest::Approx(-(1.0 / 2.0) * 0.5));  // -(n/r)(1-rho)
  CHECK(cfg.K >= 1);
  CHECK(cfg.seminorm_ceiling > 0);
}

TEST_CASE("validation: rho range") {
  nlohmann::json j = minimal("theorem11");
  j["symbol"] = {{"rho", 1.0}};
  try {
    parse_config_json(j);
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("rho in (0,1) required") != std::string::npos);
  }
}

TEST_CASE("validation: critical order mismatch names the expected value") {
  nlohmann::json j = minimal("theorem14");
  j["symbol"] = {{"rho", 0.5}, {"l", 2}, {"m", -1.0}};
  j["exponents"] = {{"r", 2.0}};
  try {
    parse_config_json(j);
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("expected -0.5") != std::string::npos);
    CHECK(msg.find("got -1") != std::string::npos);
  }
}

TEST_CASE("validation: unknown keys and experiments are rejected") {
  nlohmann::json j = minimal("theorem11");
  j["grid"] = {{"n", 1}, {"L", 32.0}, {"N", 512}, {"spacing", 0.1}};
  CHECK_THROWS_AS(parse_config_json(j), ConfigError);

  nlohmann::json j2 = minimal("theorem11");
  j2["frobnicate"] = true;
  CHECK_THROWS_AS(parse_config_json(j2), ConfigError);

  CHECK_THROWS_AS(parse_config_json(minimal("unknown")), ConfigError);
  CHECK_THROWS_AS(parse_config_json({{"experiment", "theorem11"}}), ConfigError);  // no version
}

TEST_CASE("validation: r range, exponent/weight slots, grid guards") {
  nlohmann::json j = minimal("theorem11");
  j["exponents"] = {{"r", 1.0}};
  CHECK_THROWS_AS(parse_config_json(j), ConfigError);

  nlohmann::json j15 = minimal("theorem15");
  j15["exponents"] = {{"r", 2.0}, {"p", {4.0}}};
  CHECK_THROWS_AS(parse_config_json(j15), ConfigError);
  j15["exponents"] = {{"r", 2.0}, {"p", {2.0, 2.0}}};  // needs p_j > r
  CHECK_THROWS_AS(parse_config_json(j15), ConfigError);

  nlohmann::json jc = minimal("theorem11");
  jc["grid"] = {{"n", 1}, {"L", 32.0}, {"N", 256}};  // h = 1/8 > 1/16
  CHECK_THROWS_AS(parse_config_json(jc), ConfigError);

  nlohmann::json jn = minimal("theorem11");
  jn["grid"] = {{"n", 1}, {"L", 32.0}, {"N", 500}};
  CHECK_THROWS_AS(parse_config_json(jn), ConfigError);
}

TEST_CASE("lebesgue mode B lambda interval is validated with the interval") {
  nlohmann::json j = minimal("lebesgue_bounds");
  j["symbol"] = {{"rho", 0.75}, {"l", 2}};
  j["exponents"] = {{"r", 2.0}, {"lambda", 0.9}};
  try {
    parse_config_json(j);
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lambda must lie in (0.5, 0.75)") != std::string::npos);
  }
  // auto lambda picks the midpoint
  j["exponents"] = {{"r", 2.0}};
  ExperimentConfig cfg = parse_config_json(j);
  CHECK(cfg.lambda == doctest::Approx(0.625));
}

TEST_CASE("parse errors report line and column") {
  std::string path = "/tmp/maxharm_bad_config.json";
  {
    std::ofstream out(path);
    out << "{\n  \"schema_version\": 1,\n  \"experiment\" \"theorem11\"\n}\n";
  }
  try {
    parse_config(path);
    FAIL("expected parse error");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("/nonexistent/nope.json"), ConfigError);
}

TEST_CASE("catalog lists every experiment and bundled samples round-trip") {
  const auto& catalog = experiment_catalog();
  std::vector<std::string> expected{"theorem11",       "theorem14",    "bmo_corollary",
                                    "theorem15",       "lebesgue_bounds", "kernel_decay",
                                    "trace"};
  REQUIRE(catalog.size() == expected.size());
  for (const auto& id : expected) {
    bool found = false;
    for (const auto& info : catalog)
      if (info.id == id) found = true;
    CHECK_MESSAGE(found, id);
    ExperimentConfig cfg = parse_config(std::string(MAXHARM_CONFIG_DIR) + "/" + id + ".json");
    CHECK(cfg.experiment == id);
  }
}

TEST_CASE("resolved config embeds every resolved field") {
  ExperimentConfig cfg = parse_config_json(minimal("theorem11"));
  nlohmann::json j = resolved_config_json(cfg);
  CHECK(j["grid"]["N"] == 512);
  CHECK(j["symbol"]["K"] == cfg.K);
  CHECK(j["corpus"]["size"] == 24);
  CHECK(j["tolerances"]["slope"] == 0.1);
  CHECK(j["schema_version"] == 1);
}
