#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bq/io.hpp"

using namespace bq;
namespace fs = std::filesystem;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(nlohmann::json::parse(R"({"scenario":"m3","seed":7,"tol_scale":2,"params":{"x":1}})"));
  CHECK(cfg.scenario == "m3");
  CHECK(cfg.options.seed == 7);
  CHECK(cfg.options.tol_scale == 2.0);
  CHECK(cfg.options.params["x"] == 1);
  CHECK(code_of([] { parse_config(nlohmann::json::parse(R"({"scenaro":"m3"})")); }) == Errc::ConfigError);
  CHECK(code_of([] { parse_config(nlohmann::json::parse(R"({"seed":"x"})")); }) == Errc::ConfigError);
  CHECK(code_of([] { parse_config(nlohmann::json::parse(R"({"tol_scale":-1})")); }) == Errc::ConfigError);
  CHECK(code_of([] { load_config("/nonexistent/cfg.json"); }) == Errc::ConfigError);
  CHECK(config_hash(nlohmann::json{{"a", 1}}) == config_hash(nlohmann::json{{"a", 1}}));
  CHECK(config_hash(nlohmann::json{{"a", 1}}) != config_hash(nlohmann::json{{"a", 2}}));
}

TEST_CASE("scenario errors") {
  CHECK(code_of([] { run_scenario("nope", {}); }) == Errc::ConfigError);
  RunOptions o;
  o.params = nlohmann::json::parse(R"({"z":[[0.3,0.2],[0.3,0.2]]})");
  CHECK(code_of([&] { run_scenario("bpt", o); }) == Errc::ConfigError);
  o.params = nlohmann::json::parse(R"({"z":[[0.3,0.2],[0.5,0.1],[0.3,0.2]]})");
  CHECK(code_of([&] { run_scenario("m3", o); }) == Errc::ConfigError);
  CHECK(scenario_names().size() == 10);
}

TEST_CASE("plot data needs a run") {
  const fs::path dir = fs::temp_directory_path() / "bq_test_empty_run";
  fs::remove_all(dir);
  fs::create_directories(dir);
  CHECK(code_of([&] { emit_plotdata(dir.string()); }) == Errc::MissingRun);
  fs::remove_all(dir);
}

TEST_CASE("re-running a config reproduces the check table byte for byte") {
  const auto cfg = parse_config(nlohmann::json::parse(R"({"scenario":"elliptic","seed":3})"));
  const fs::path a = fs::temp_directory_path() / "bq_test_run_a", b = fs::temp_directory_path() / "bq_test_run_b";
  for (const auto& d : {a, b}) {
    fs::remove_all(d);
    write_run(d.string(), run_scenario(cfg.scenario, cfg.options), cfg);
    emit_plotdata(d.string());
  }
  CHECK(fs::exists(a / "report.json"));
  const auto ca = slurp(a / "checks.csv");
  CHECK(!ca.empty());
  CHECK(ca == slurp(b / "checks.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("fitted slope") {
  std::vector<double> h = {0.04, 0.02, 0.01}, v;
  for (double x : h) v.push_back(3.0 * x * x);
  CHECK(fitted_slope(h, v) == doctest::Approx(2.0).epsilon(1e-12));
}
