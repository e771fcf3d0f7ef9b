// Runs every scenario once and folds the named checks into one verdict per acceptance criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <thread>

#include "bq/pipelines.hpp"

using namespace bq;

namespace {

struct Criterion {
  const char* label;
  std::vector<std::pair<const char*, const char*>> checks;  // (scenario, check)
};

const std::vector<Criterion> kCriteria = {
    {"sj-square-root", {{"ivory-check", "sj_sqrt"}, {"ivory-check", "sj_runtime_s"}}},
    {"ivory-identities",
     {{"ivory-check", "ivory_theorem"},
      {"ivory-check", "tc_symmetry"},
      {"ivory-check", "ruling_length"},
      {"ivory-check", "segment_ruling"},
      {"ivory-check", "polar_ruling"},
      {"ivory-check", "lame_orthogonality"},
      {"ivory-check", "ivory_runtime_s"}}},
    {"isotropic-parametrization", {{"ivory-check", "lmap_invariants"}, {"ivory-check", "shift_on_paraboloid"}}},
    {"zero-soliton-integrability",
     {{"deform-0soliton", "prime_drift"},
      {"deform-0soliton", "prime_drift_ratio"},
      {"deform-0soliton", "defqwc_zero_soliton"}}},
    {"riccati-integration",
     {{"backlund-qwc", "orth_drift"},
      {"backlund-qwc", "path_mismatch"},
      {"backlund-qwc", "path_mismatch_ratio"},
      {"backlund-qwc", "leaf_system_slope_dev"}}},
    {"involution", {{"backlund-qwc", "involution"}, {"backlund-qc", "qc_involution"}}},
    {"degenerate-seed-geometry",
     {{"leaf-embed", "confocal_counterpart"}, {"leaf-embed", "ruling_condition"}, {"leaf-embed", "facet_isotropy"}}},
    {"ivory-applicability", {{"leaf-embed", "acpia_metric"}, {"leaf-embed", "joined_forms"}}},
    {"permutability",
     {{"bpt", "bpt_orthogonality"},
      {"bpt", "bpt_scalar_identity"},
      {"bpt", "bpt_riccati_slope_dev"},
      {"bpt", "lattice_order_independence"}}},
    {"cube-configuration", {{"m3", "m3_integrated"}, {"m3", "m3_symmetric_input"}, {"m3", "cube_closure"}}},
    {"structure-equations",
     {{"deform-0soliton", "gauss_zero_soliton"},
      {"deform-0soliton", "codazzi_zero_soliton"},
      {"deform-0soliton", "ricci_zero_soliton"},
      {"backlund-qwc", "leaf_forms_slope"}}},
    {"sine-gordon-reduction", {{"sine-gordon", "sine_gordon_correlation"}}},
};

}  // namespace

int main() {
  RunOptions opt;
  opt.threads = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 4u));
  const auto t0 = std::chrono::steady_clock::now();
  std::map<std::string, Report> reports;
  for (const auto& c : kCriteria)
    for (const auto& [sc, name] : c.checks)
      if (!reports.count(sc)) reports.emplace(sc, run_scenario(sc, opt));

  int failed = 0;
  for (size_t i = 0; i < kCriteria.size(); ++i) {
    const auto& c = kCriteria[i];
    bool ok = true;
    std::string detail;
    for (const auto& [sc, name] : c.checks) {
      const Check* k = reports.at(sc).find(name);
      char buf[160];
      if (!k) {
        ok = false;
        std::snprintf(buf, sizeof buf, " %s=missing", name);
      } else {
        ok = ok && k->pass;
        if (k->lower_bound)
          std::snprintf(buf, sizeof buf, " %s=%.6g>=%.3g", name, k->value, k->tol);
        else
          std::snprintf(buf, sizeof buf, " %s=%.2e<%.0e", name, k->value, k->tol);
      }
      detail += buf;
    }
    if (!ok) ++failed;
    std::printf("%s %2zu %-27s%s\n", ok ? "PASS" : "FAIL", i + 1, c.label, detail.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%zu/%zu criteria passed in %.1f s, %d worker thread(s)\n", kCriteria.size() - failed, kCriteria.size(), secs,
              opt.threads);
  return failed ? 1 : 0;
}
