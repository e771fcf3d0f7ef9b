#include "bq/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bq {

namespace fs = std::filesystem;
using json = nlohmann::json;

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::ConfigError, "config must be a JSON object");
  static const char* known[] = {"scenario", "seed", "threads", "tol_scale", "params"};
  for (const auto& [k, v] : doc.items()) {
    bool ok = false;
    for (const char* key : known) ok = ok || k == key;
    if (!ok) throw Error(Errc::ConfigError, "unknown config key '" + k + "'");
  }
  RunConfig c;
  c.source = doc;
  try {
    c.scenario = doc.value("scenario", std::string());
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) throw Error(Errc::ConfigError, "seed must be a non-negative integer");
      c.options.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("threads")) {
      if (!doc["threads"].is_number_integer() || doc["threads"].get<int>() < 1)
        throw Error(Errc::ConfigError, "threads must be a positive integer");
      c.options.threads = doc["threads"].get<int>();
    }
    if (doc.contains("tol_scale")) {
      if (!doc["tol_scale"].is_number() || !(doc["tol_scale"].get<double>() > 0))
        throw Error(Errc::ConfigError, "tol_scale must be positive");
      c.options.tol_scale = doc["tol_scale"].get<double>();
    }
    if (doc.contains("params")) {
      if (!doc["params"].is_object()) throw Error(Errc::ConfigError, "params must be an object");
      c.options.params = doc["params"];
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open " + path);
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(Errc::ConfigError, std::string("invalid JSON: ") + e.what());
  }
}

std::string config_hash(const json& doc) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json report_to_json(const Report& r) {
  json j;
  j["scenario"] = r.scenario;
  j["passed"] = r.passed();
  j["provenance"] = r.provenance;
  j["tolerances"] = r.tolerances;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", num_or_null(c.value)},
                      {"tolerance", c.info ? json(nullptr) : num_or_null(c.tol)},
                      {"bound", c.info ? "info" : (c.lower_bound ? "min" : "max")},
                      {"pass", c.pass},
                      {"samples", c.samples},
                      {"runtime_s", c.seconds},
                      {"note", c.note}});
  }
  j["checks"] = checks;
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
  j["tables"] = tables;
  return j;
}

void write_run(const std::string& dir, const Report& r, const RunConfig& cfg) {
  fs::create_directories(dir);
  json j = report_to_json(r);
  j["provenance"]["config_hash"] = config_hash(cfg.source);
  j["provenance"]["config"] = cfg.source;
  j["provenance"]["library_version"] = "1.0.0";
  std::ofstream(fs::path(dir) / "report.json") << j.dump(2) << "\n";
  // No runtimes here so identical seeds give identical files.
  std::ofstream csv(fs::path(dir) / "checks.csv");
  csv << "name,value,tolerance,bound,pass,samples\n";
  for (const auto& c : r.checks)
    csv << c.name << "," << fmt(c.value) << "," << (c.info ? "" : fmt(c.tol)) << ","
        << (c.info ? "info" : (c.lower_bound ? "min" : "max")) << "," << (c.pass ? 1 : 0) << "," << c.samples << "\n";
}

void emit_plotdata(const std::string& dir) {
  const fs::path p = fs::path(dir) / "report.json";
  std::ifstream in(p);
  if (!in) throw Error(Errc::MissingRun, "no report.json in " + dir);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::MissingRun, std::string("unreadable report: ") + e.what());
  }
  if (!j.contains("tables")) throw Error(Errc::MissingRun, "report has no tables");
  for (const auto& t : j["tables"]) {
    std::ofstream out(fs::path(dir) / (t["name"].get<std::string>() + ".csv"));
    const auto& cols = t["columns"];
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].get<std::string>();
    out << "\n";
    for (const auto& row : t["rows"]) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << (row[i].is_null() ? std::string() : fmt(row[i].get<double>()));
      out << "\n";
    }
  }
}

}  // namespace bq
