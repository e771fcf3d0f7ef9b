#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bq/types.hpp"

namespace bq {

struct Check {
  std::string name;
  double value = 0;
  double tol = 0;
  bool lower_bound = false;  // pass when value >= tol instead of value < tol
  bool info = false;         // reported only
  bool pass = false;
  long samples = 0;
  double seconds = 0;
  std::string note;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string scenario;
  std::vector<Check> checks;
  std::vector<Table> tables;
  nlohmann::json provenance = nlohmann::json::object();
  std::map<std::string, double> tolerances;  // effective values after scaling
  bool passed() const;
  const Check* find(const std::string& name) const;
};

struct RunOptions {
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  int threads = 1;
  nlohmann::json params = nlohmann::json::object();  // scenario overrides
};

using Scenario = std::function<Report(const RunOptions&)>;

const std::vector<std::string>& scenario_names();
// Throws ConfigError for unknown names or invalid overrides.
Report run_scenario(const std::string& name, const RunOptions& opt);

// Slope of log(value) against log(h), least squares.
double fitted_slope(const std::vector<double>& h, const std::vector<double>& value);

}  // namespace bq
