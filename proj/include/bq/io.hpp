#pragma once

#include <string>

#include "bq/pipelines.hpp"

namespace bq {

struct RunConfig {
  std::string scenario;
  RunOptions options;
  nlohmann::json source = nlohmann::json::object();
};

// {"scenario", "seed", "threads", "tol_scale", "params"}; throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

std::string config_hash(const nlohmann::json& doc);
nlohmann::json report_to_json(const Report& r);

// report.json and checks.csv under dir (created if needed).
void write_run(const std::string& dir, const Report& r, const RunConfig& cfg);
// One CSV per report table; throws MissingRun without a report.json.
void emit_plotdata(const std::string& dir);

}  // namespace bq
