#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "bq/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bäcklund transformations of quadric deformations: verification scenarios"};
  std::string scenario, config, out = "run";
  std::uint64_t seed = 0;
  double tol_scale = 0;
  int threads = 0;
  bool list = false;
  app.add_option("--scenario", scenario, "scenario name");
  app.add_option("--config", config, "JSON config file");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--tol-scale", tol_scale, "multiplies all tolerances")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--list", list, "list scenarios");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (list) {
    for (const auto& s : bq::scenario_names()) std::cout << s << "\n";
    return 0;
  }
  try {
    bq::RunConfig cfg = config.empty() ? bq::parse_config(nlohmann::json::object()) : bq::load_config(config);
    if (!scenario.empty()) {
      if (!cfg.scenario.empty() && cfg.scenario != scenario)
        throw bq::Error(bq::Errc::ConfigError, "--scenario disagrees with config");
      cfg.scenario = scenario;
    }
    if (cfg.scenario.empty()) throw bq::Error(bq::Errc::ConfigError, "no scenario given");
    if (app.count("--seed")) cfg.options.seed = seed;
    if (app.count("--tol-scale")) cfg.options.tol_scale = tol_scale;
    if (app.count("--threads")) cfg.options.threads = threads;
    const bq::Report rep = bq::run_scenario(cfg.scenario, cfg.options);
    bq::write_run(out, rep, cfg);
    bq::emit_plotdata(out);
    for (const auto& c : rep.checks) {
      const char* tag = c.info ? "INFO" : (c.pass ? "PASS" : "FAIL");
      std::printf("%-4s %-32s %.3e", tag, c.name.c_str(), c.value);
      if (!c.info) std::printf(" %s %.1e", c.lower_bound ? ">=" : "<", c.tol);
      if (!c.note.empty()) std::printf("  (%s)", c.note.c_str());
      std::printf("\n");
    }
    return rep.passed() ? 0 : 1;
  } catch (const bq::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == bq::Errc::ConfigError ? 2 : 1;
  }
}
