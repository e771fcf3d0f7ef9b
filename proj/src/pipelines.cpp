#include "bq/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <bit>

#include "bq/embed.hpp"
#include "bq/permute.hpp"

namespace bq {

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& value) {
  const int k = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < k; ++i) {
    const double x = std::log(h[i]), y = std::log(std::max(value[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

// Reads scenario overrides and records checks.
class Run {
 public:
  Run(const std::string& scenario, const RunOptions& opt) : opt_(opt) {
    if (!opt.params.is_object()) config_error("params must be an object");
    if (!(opt.tol_scale > 0)) config_error("tol_scale must be positive");
    if (opt.params.contains("tolerances") && !opt.params["tolerances"].is_object())
      config_error("tolerances must be an object");
    rep_.scenario = scenario;
    rep_.provenance["seed"] = opt.seed;
    rep_.provenance["tol_scale"] = opt.tol_scale;
  }

  const RunOptions& opt() const { return opt_; }
  Report& report() { return rep_; }

  double num(const std::string& key, double def) const {
    if (!opt_.params.contains(key)) return def;
    const auto& v = opt_.params[key];
    if (!v.is_number()) config_error(key + " must be a number");
    return v.get<double>();
  }

  int count(const std::string& key, int def, int lo = 1) const {
    const double v = num(key, def);
    if (v < lo || v != std::floor(v)) config_error(key + " must be an integer >= " + std::to_string(lo));
    return static_cast<int>(v);
  }

  static cd parse_cd(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    config_error(key + " must be [re, im]");
  }

  cd complex(const std::string& key, cd def) const {
    return opt_.params.contains(key) ? parse_cd(opt_.params[key], key) : def;
  }

  std::vector<cd> complex_list(const std::string& key, const std::vector<cd>& def) const {
    if (!opt_.params.contains(key)) return def;
    const auto& v = opt_.params[key];
    if (!v.is_array()) config_error(key + " must be a list of [re, im]");
    std::vector<cd> out;
    for (const auto& e : v) out.push_back(parse_cd(e, key));
    return out;
  }

  // Quadric override {"kind": ..., "blocks": [{"a": [re, im], "p": k}, ...]}.
  QuadricSpec quadric(const QuadricSpec& def) const {
    if (!opt_.params.contains("quadric")) return def;
    const auto& v = opt_.params["quadric"];
    if (!v.is_object() || !v.contains("kind") || !v.contains("blocks") || !v["blocks"].is_array())
      config_error("quadric needs kind and blocks");
    SJSpec sj;
    for (const auto& b : v["blocks"]) {
      if (!b.is_object() || !b.contains("a")) config_error("SJ block needs a");
      SJBlock blk;
      blk.a = parse_cd(b["a"], "a");
      blk.p = b.value("p", 1);
      if (blk.p < 1) config_error("SJ block size must be positive");
      sj.blocks.push_back(blk);
    }
    try {
      return make_quadric(parse_kind(v["kind"].get<std::string>()), sj);
    } catch (const Error& e) {
      config_error(e.what());
    }
  }

  double tol(const std::string& name, double def) {
    double t = def;
    if (opt_.params.contains("tolerances") && opt_.params["tolerances"].contains(name)) {
      const auto& v = opt_.params["tolerances"][name];
      if (!v.is_number() || !(v.get<double>() > 0)) config_error("tolerance " + name + " must be positive");
      t = v.get<double>();
    }
    t *= opt_.tol_scale;
    rep_.tolerances[name] = t;
    return t;
  }

  // value < tol passes.
  void upper(const std::string& name, double value, double def_tol, long samples, double secs,
             const std::string& note = "") {
    add(name, value, tol(name, def_tol), false, samples, secs, note);
  }
  // value >= bound passes; bounds are not scaled.
  void lower(const std::string& name, double value, double bound, long samples, double secs,
             const std::string& note = "") {
    rep_.tolerances[name] = bound;
    add(name, value, bound, true, samples, secs, note);
  }
  void info(const std::string& name, double value, long samples, const std::string& note = "") {
    Check c;
    c.name = name;
    c.value = value;
    c.info = true;
    c.pass = true;
    c.samples = samples;
    c.note = note;
    rep_.checks.push_back(c);
  }
  void failed(const std::string& name, const std::string& why) {
    Check c;
    c.name = name;
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.pass = false;
    c.note = why;
    rep_.checks.push_back(c);
  }
  void table(Table t) { rep_.tables.push_back(std::move(t)); }

  // Runs a block; module errors become a failed check named `name`.
  template <class F>
  void guard(const std::string& name, F&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigError) throw;
      failed(name, e.what());
    }
  }

 private:
  void add(const std::string& name, double value, double t, bool lower_bound, long samples, double secs,
           const std::string& note) {
    Check c;
    c.name = name;
    c.value = value;
    c.tol = t;
    c.lower_bound = lower_bound;
    c.pass = std::isfinite(value) && (lower_bound ? value >= t : value < t);
    c.samples = samples;
    c.seconds = secs;
    c.note = note;
    rep_.checks.push_back(c);
  }

  const RunOptions& opt_;
  Report rep_;
};

// Nodes on the lattice step·Z within [lo, hi] in every coordinate; same physical points across refinements.
std::vector<int> fixed_nodes(const GridSpec& g, double step, double lo, double hi) {
  std::vector<int> out;
  for (int i = 0; i < g.nodes(); ++i) {
    const auto u = g.point(i);
    bool ok = true;
    for (int a = 0; a < g.n && ok; ++a) {
      const double k = u(a) / step;
      ok = std::abs(k - std::round(k)) < 1e-9 && u(a) > lo - 1e-9 && u(a) < hi + 1e-9;
    }
    if (ok) out.push_back(i);
  }
  return out;
}

std::vector<int> interior_nodes(const GridSpec& g, int margin) {
  std::vector<int> out;
  for (int i = 0; i < g.nodes(); ++i)
    if (g.interior(i, margin)) out.push_back(i);
  return out;
}

// Seed state (V, Λ) with Λ completed so that the prime integral holds.
void complete_lambda(const SystemData& sys, const CVec& V, CVec& Lam) {
  cd rest = -system_h(sys, V);
  for (int j = 0; j + 1 < Lam.size(); ++j) rest -= Lam(j) * Lam(j);
  Lam(Lam.size() - 1) = branch_sqrt(rest);
}

void random_state(const SystemData& sys, std::mt19937_64& rng, CVec& V, CVec& Lam) {
  V = random_cvec(sys.n, rng, 0.3);
  Lam = random_cvec(sys.n, rng);
  Lam *= branch_sqrt(-system_h(sys, V)) / branch_sqrt(bsq(Lam));
}

// Well-conditioned default 0-soliton seed.
struct SeedSetup {
  QuadricSpec q;
  LMap lm;
  SystemData sys;
  CVec V, Lam;
};

SeedSetup default_seed(const Run& run, int n) {
  std::vector<cd> a = {{1, 0.2}, {0.5, -0.1}, {0.8, 0.1}};
  a.resize(n);
  SeedSetup s;
  s.q = run.quadric(make_qwc_diag(a));
  if (s.q.kind == Kind::QC) config_error("this scenario needs a quadric without center");
  s.lm = build_lmap(s.q, run.opt().seed, s.q.kind == Kind::IQWC);
  s.sys = make_system(s.q, s.lm);
  const int nn = s.q.n;
  s.V = CVec::Zero(nn);
  s.Lam = CVec::Zero(nn);
  const std::vector<double> v0 = {0.1, 0.2, -0.1};
  const std::vector<cd> l0 = {{0.7, 0.9}, {0.4, 0.6}};
  for (int j = 0; j < nn; ++j) s.V(j) = v0[j % 3];
  if (nn == 3) s.Lam(0) = cd(0.5, 0.9);
  else s.Lam(0) = l0[0];
  if (nn >= 3) s.Lam(1) = l0[1];
  for (int j = 2; j + 1 < nn; ++j) s.Lam(j) = cd(0.3, 0.5);
  if (run.opt().params.contains("V")) {
    const auto v = run.complex_list("V", {});
    if (static_cast<int>(v.size()) != nn) config_error("V must have n entries");
    for (int j = 0; j < nn; ++j) s.V(j) = v[j];
  }
  if (run.opt().params.contains("Lambda")) {
    const auto v = run.complex_list("Lambda", {});
    if (static_cast<int>(v.size()) != nn - 1) config_error("Lambda lists the first n-1 entries");
    for (int j = 0; j + 1 < nn; ++j) s.Lam(j) = v[j];
  }
  complete_lambda(s.sys, s.V, s.Lam);
  return s;
}

Table convergence_table(const std::string& name, const std::vector<double>& h,
                        const std::vector<std::pair<std::string, std::vector<double>>>& cols) {
  Table t;
  t.name = name;
  t.columns.push_back("h");
  for (const auto& c : cols) t.columns.push_back(c.first);
  for (size_t i = 0; i < h.size(); ++i) {
    std::vector<double> row{h[i]};
    for (const auto& c : cols) row.push_back(c.second[i]);
    t.rows.push_back(row);
  }
  return t;
}

// ---------------------------------------------------------------- ivory-check

SJSpec random_sj(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 8);
  std::uniform_real_distribution<double> mod(0.3, 2.0), ang(-std::numbers::pi, std::numbers::pi);
  const int m = dim(rng);
  SJSpec s;
  int left = m;
  while (left > 0) {
    std::uniform_int_distribution<int> ps(1, std::min(4, left));
    const int p = ps(rng);
    s.blocks.push_back({std::polar(mod(rng), ang(rng)), p});
    left -= p;
  }
  return s;
}

std::vector<std::pair<std::string, QuadricSpec>> ivory_family(const Run& run) {
  if (run.opt().params.contains("quadric")) return {{"custom", run.quadric(QuadricSpec{})}};
  return {
      {"QC n=2", make_qc_diag({{2.0, 0.3}, {1.5, -0.2}, {3.0, 0.1}})},
      {"QC n=3", make_qc_diag({{2.0, 0.3}, {1.5, -0.2}, {3.0, 0.1}, {0.7, 0.4}})},
      {"QWC n=2", make_qwc_diag({{1.0, 0.2}, {0.5, -0.1}})},
      {"QWC n=3", make_qwc_diag({{1.0, 0.2}, {0.5, -0.1}, {0.8, 0.1}})},
      {"IQWC n=2", make_iqwc(2, {{0.9, 0.2}})},
      {"IQWC n=3", make_iqwc(2, {{0.9, 0.2}, {0.6, -0.3}})},
  };
}

void lame_check(Run& run, const std::vector<std::pair<std::string, QuadricSpec>>& fam, int samples) {
  run.guard("lame_orthogonality", [&] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(run.opt().seed * 7919 + 3);
    double worst = 0;
    long done = 0, misses = 0;
    for (const auto& [label, q] : fam) {
      const auto lm = build_lmap(q, run.opt().seed);
      int got = 0;
      while (got < samples && misses < 50L * samples) {
        const cd z1 = random_cd(rng, 0.4), z2 = random_cd(rng, 0.4);
        if (std::abs(z1 - z2) < 0.1) continue;
        const auto x = intersect_confocal(q, z1, z2, sample_on_quadric(q, lm, rng));
        if (!x) {
          ++misses;
          continue;
        }
        worst = std::max(worst, confocal_orthogonality_residual(q, z1, z2, *x));
        ++got;
      }
      done += got;
    }
    if (done < static_cast<long>(fam.size()) * samples) throw Error(Errc::StepFailure, "too few intersections found");
    run.upper("lame_orthogonality", worst, 1e-10, done, seconds_since(t0));
  });
}

Report scenario_ivory(const RunOptions& opt) {
  Run run("ivory-check", opt);
  const int sj_samples = run.count("sj_samples", 200);
  const int samples = run.count("samples", 1000);
  const int lame_samples = run.count("lame_samples", 100);

  run.guard("sj_sqrt", [&] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed);
    double worst = 0;
    for (int i = 0; i < sj_samples; ++i) {
      const SJSpec s = random_sj(rng);
      const CMat S = sqrt_sj(s);
      worst = std::max(worst, inf_norm(S * S - build_sj(s)));
    }
    const double secs = seconds_since(t0);
    run.upper("sj_sqrt", worst, 1e-12, sj_samples, secs);
    run.upper("sj_runtime_s", secs, 1.0, sj_samples, secs);
  });

  const auto t_ivory = Clock::now();
  const auto fam = ivory_family(run);
  double w_thm = 0, w_tc = 0, w_len = 0, w_seg = 0, w_pol = 0;
  long total = 0;
  Table per_kind{"ivory_by_kind", {"kind_index", "theorem", "tc", "ruling_length", "segment", "polar"}, {}};
  run.guard("ivory_identities", [&] {
    std::mt19937_64 rng(opt.seed * 31 + 1);
    for (size_t f = 0; f < fam.size(); ++f) {
      const auto& q = fam[f].second;
      const auto lm = build_lmap(q, opt.seed);
      double k_thm = 0, k_tc = 0, k_len = 0, k_seg = 0, k_pol = 0;
      for (int s = 0; s < samples; ++s) {
        const cd z = random_cd(rng, 0.35);
        const CVec xa = sample_on_quadric(q, lm, rng), xb = sample_on_quadric(q, lm, rng);
        const CVec w = ruling_direction(q, xa, rng);
        const CVec wh = polar_direction(q, xa, w, rng);
        k_thm = std::max(k_thm, ivory_theorem_residual(q, z, xa, xb));
        k_tc = std::max(k_tc, tc_symmetry_residual(q, z, xa, xb));
        k_len = std::max(k_len, ruling_length_residual(q, z, xa, w));
        k_seg = std::max(k_seg, segment_ruling_residual(q, z, xa, xb, w));
        k_pol = std::max(k_pol, polar_ruling_residual(q, z, xa, w, wh));
      }
      per_kind.rows.push_back({static_cast<double>(f), k_thm, k_tc, k_len, k_seg, k_pol});
      w_thm = std::max(w_thm, k_thm);
      w_tc = std::max(w_tc, k_tc);
      w_len = std::max(w_len, k_len);
      w_seg = std::max(w_seg, k_seg);
      w_pol = std::max(w_pol, k_pol);
      total += samples;
    }
    const double secs = seconds_since(t_ivory);
    run.upper("ivory_theorem", w_thm, 1e-10, total, secs);
    run.upper("tc_symmetry", w_tc, 1e-10, total, secs);
    run.upper("ruling_length", w_len, 1e-10, total, secs);
    run.upper("segment_ruling", w_seg, 1e-10, total, secs);
    run.upper("polar_ruling", w_pol, 1e-10, total, secs);
  });
  run.table(per_kind);
  lame_check(run, fam, lame_samples);
  const double ivory_secs = seconds_since(t_ivory);
  run.upper("ivory_runtime_s", ivory_secs, 10.0, total, ivory_secs);

  run.guard("lmap_invariants", [&] {
    const auto t0 = Clock::now();
    const std::vector<cd> zs = {{0.3, 0.2}, {-0.4, 0.1}, {0.2, -0.5}};
    double worst = 0, top = 0;
    for (int p : {2, 3}) {
      for (int n : {2, 3}) {
        const int rest = n + 1 - p;
        if (rest < 1) continue;
        std::vector<cd> a = {{0.9, 0.2}, {0.6, -0.3}};
        a.resize(rest);
        const auto q = make_iqwc(p, a);
        const auto lm = build_lmap(q, opt.seed, true);
        const auto r = check_lmap(q, lm, zs);
        worst = std::max(worst, r.max());
        top = std::max(top, r.on_paraboloid);
      }
    }
    const double secs = seconds_since(t0);
    run.upper("lmap_invariants", worst, 1e-9, 3, secs);
    run.upper("shift_on_paraboloid", top, 1e-9, 3, secs);
  });
  return run.report();
}

// ---------------------------------------------------------------- elliptic

Report scenario_elliptic(const RunOptions& opt) {
  Run run("elliptic", opt);
  const int samples = run.count("samples", 200);
  const auto fam = ivory_family(run);
  run.guard("elliptic_roots", [&] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed * 97 + 5);
    double worst = 0;
    long done = 0;
    for (const auto& [label, q] : fam) {
      for (int s = 0; s < samples; ++s) {
        const CVec x = random_cvec(q.n + 1, rng, 0.8);
        for (cd z : elliptic_coordinates(q, x)) worst = std::max(worst, std::abs(eval_confocal(q, z, x)));
        ++done;
      }
    }
    run.upper("elliptic_roots", worst, 1e-8, done, seconds_since(t0));
  });
  lame_check(run, fam, run.count("lame_samples", 100));
  return run.report();
}

// ---------------------------------------------------------------- deform-0soliton

Report scenario_zero_soliton(const RunOptions& opt) {
  Run run("deform-0soliton", opt);
  const int n = run.count("n", 2, 2);
  if (n > 3) config_error("n must be 2 or 3");
  const auto s = default_seed(run, n);
  const double h = run.num("h", n == 2 ? 0.02 : 0.04);
  const int cnt = run.count("count", n == 2 ? 32 : 12, 5);

  double adm_res = 0;
  const bool adm = peterson_admissible(s.sys, 1e-12, &adm_res);
  run.upper("peterson_admissible", adm_res, 1e-12, 1, 0.0, adm ? "" : "off-diagonal A' block; dependent checks skipped");
  if (!adm) return run.report();

  run.guard("prime_drift", [&] {
    const auto t0 = Clock::now();
    const auto g = make_grid(n, 0.0, h, cnt);
    const auto zs = zero_soliton(s.sys, g, s.V, s.Lam, default_order(n), opt.threads);
    run.upper("prime_drift", zs.prime_drift, 1e-8, g.nodes(), seconds_since(t0));

    // Drift and error against the closed form at h and h/2 over the same extent; 2h for the table.
    const ZeroSolitonExact ex(s.sys, g.point(0), s.V, s.Lam);
    std::vector<double> hs, errs, drifts;
    for (int k = 0; k < 3; ++k) {
      const double hk = 2 * h / (1 << k);
      const int steps = k == 0 ? (cnt - 1) / 2 : (cnt - 1) << (k - 1);
      const auto gk = make_grid(n, 0.0, hk, steps + 1);
      const auto zk = zero_soliton(s.sys, gk, s.V, s.Lam, default_order(n), opt.threads);
      double e = 0;
      for (int i = 0; i < gk.nodes(); ++i) {
        CVec V, L;
        ex.eval(gk.point(i), V, L);
        e = std::max({e, max_abs(V - zk.field.V[i]), max_abs(L - zk.field.Lam[i])});
      }
      hs.push_back(hk);
      errs.push_back(e);
      drifts.push_back(zk.prime_drift);
    }
    const double secs_c = seconds_since(t0);
    run.lower("prime_drift_ratio", drifts[1] / std::max(drifts[2], 1e-300), 12.0, 2, secs_c,
              "h=" + std::to_string(hs[1]) + " vs " + std::to_string(hs[2]));
    run.lower("rk4_error_ratio", errs[1] / std::max(errs[2], 1e-300), 12.0, 2, secs_c, "against the closed form");
    run.table(convergence_table("zero_soliton_convergence", hs, {{"closed_form_error", errs}, {"prime_drift", drifts}}));

    const auto d = residual_defqwc(g, zs.field.R, s.sys.Apn, 2, 1);
    run.upper("defqwc_zero_soliton", d.max(), 1e-8, g.nodes(), seconds_since(t0));
    run.upper("system_zero_soliton", system_residual(s.sys, zs.field, 4, 2), 1e-6, g.nodes(), seconds_since(t0));
  });

  run.guard("forms_zero_soliton", [&] {
    const auto t0 = Clock::now();
    const double hf = run.num("forms_h", n == 2 ? 0.01 : 0.02);
    const int cf = run.count("forms_count", n == 2 ? 33 : 12, 9);
    const auto g = make_grid(n, 0.0, hf, cf);
    const auto zs = zero_soliton(s.sys, g, s.V, s.Lam, default_order(n), opt.threads);
    const auto ff = forms_assemble(s.q, s.lm, zs.field, opt.seed, 4, true);
    const auto r = forms_check(ff, g, 4, interior_nodes(g, 4));
    const double secs = seconds_since(t0);
    const long nn = static_cast<long>(interior_nodes(g, 4).size());
    run.upper("gauss_zero_soliton", r.gauss, 1e-6, nn, secs);
    run.upper("codazzi_zero_soliton", r.codazzi, 1e-6, nn, secs);
    run.upper("ricci_zero_soliton", r.ricci, 1e-6, nn, secs);
    run.upper("joined_orth_zero_soliton", r.joined_orth, 1e-6, nn, secs);
    run.info("gauss_quadric_normal", r.gauss_quadric, nn, "curvature against h0 alone");
    run.info("gamma_closed_vs_fd", ff.gamma_gap, nn);
  });
  return run.report();
}

// ---------------------------------------------------------------- backlund-qwc

Report scenario_backlund_qwc(const RunOptions& opt) {
  Run run("backlund-qwc", opt);
  const int n = run.count("n", 2, 2);
  if (n > 3) config_error("n must be 2 or 3");
  const auto s = default_seed(run, n);
  const cd z = run.complex("z", {0.3, 0.2});
  const auto ctx = make_context(s.q, s.lm, z);
  const CMat R1b = random_orthogonal(n, opt.seed * 1000 + 5);
  run.report().provenance["z"] = {z.real(), z.imag()};
  run.report().provenance["sqrt_z"] = {ctx.sz.real(), ctx.sz.imag()};

  run.guard("involution", [&] {
    const auto t0 = Clock::now();
    const int samples = run.count("samples", 1000);
    std::mt19937_64 rng(opt.seed * 13 + 7);
    const auto back = mirrored(ctx);
    double inv = 0, post = 0;
    for (int i = 0; i < samples; ++i) {
      CVec V0, L0;
      random_state(s.sys, rng, V0, L0);
      const CMat R0 = random_orthogonal(n, rng()), R1 = random_orthogonal(n, rng());
      const auto t = algebraic_transform(ctx, V0, L0, R0, R1);
      post = std::max(post, check_transform(ctx, V0, L0, R0, R1, t).max());
      const auto r = algebraic_transform(back, t.V, t.Lam, R1, R0);
      inv = std::max({inv, max_abs(r.V - V0), max_abs(r.Lam - L0)});
    }
    const double secs = seconds_since(t0);
    run.upper("involution", inv, 1e-10, samples, secs);
    run.upper("transform_postconditions", post, 1e-10, samples, secs);
  });

  const int cnt = run.count("count", n == 2 ? 32 : 12, 5);
  const double h = run.num("h", n == 2 ? 0.02 : 0.04);
  run.guard("riccati_integration", [&] {
    const auto t0 = Clock::now();
    const auto g = make_grid(n, 0.0, h, cnt);
    const auto run1 = integrate_backlund_qwc(ctx, g, identity_seed(n), R1b, opt.threads);
    const auto g2 = make_grid(n, 0.0, h / 2, 2 * cnt - 1);
    const auto run2 = integrate_backlund_qwc(ctx, g2, identity_seed(n), R1b, opt.threads);
    const double secs = seconds_since(t0);
    run.upper("orth_drift", run1.drift, 1e-6, g.nodes(), secs);
    run.upper("path_mismatch", run1.mismatch, 1e-6, g.nodes(), secs);
    run.lower("path_mismatch_ratio", run1.mismatch / std::max(run2.mismatch, 1e-300), 12.0, 2, secs);

    Table t{"drift_vs_arclength", {"arclength", "orth_drift"}, {}};
    std::vector<double> by(n * (cnt - 1) + 1, 0.0);
    for (int i = 0; i < g.nodes(); ++i) {
      int k = 0;
      for (int c : g.coords(i)) k += c;
      by[k] = std::max(by[k], orth_defect(run1.R1[i]));
    }
    for (size_t k = 0; k < by.size(); ++k) t.rows.push_back({k * h, by[k]});
    run.table(t);
  });

  run.guard("leaf_convergence", [&] {
    const auto t0 = Clock::now();
    const double step = n == 2 ? 0.08 : 0.16;
    std::vector<double> hs, sys_r, def_r, forms_r;
    for (int k = 0; k < 3; ++k) {
      const double hk = (n == 2 ? 0.04 : 0.08) / (1 << k);
      const int ck = 8 * (1 << k) + 1;
      const auto g = make_grid(n, 0.0, hk, ck);
      const auto zs = zero_soliton(s.sys, g, s.V, s.Lam, default_order(n), opt.threads);
      const auto r1 = integrate_backlund_qwc(ctx, g, identity_seed(n), R1b, opt.threads).R1;
      const auto f1 = transform_field(ctx, zs.field, r1);
      const auto nodes = fixed_nodes(g, step, step, 3 * step);
      hs.push_back(hk);
      sys_r.push_back(system_residual_at(s.sys, f1, 2, nodes));
      const auto field = defqwc_field(g, r1, s.sys.Apn, 2);
      double d = 0;
      for (int i : nodes) d = std::max(d, max_abs(field[i]));
      def_r.push_back(d);
      const auto ff = forms_assemble(s.q, s.lm, f1, opt.seed, 4, true);
      const auto fr = forms_check(ff, g, 4, nodes);
      forms_r.push_back(std::max({fr.gauss, fr.codazzi, fr.ricci}));
    }
    const double secs = seconds_since(t0);
    const double sl = fitted_slope(hs, sys_r), dl = fitted_slope(hs, def_r), fl = fitted_slope(hs, forms_r);
    run.upper("leaf_system_slope_dev", std::abs(sl - 2.0), 0.3, 3, secs, "fitted slope " + std::to_string(sl));
    run.upper("leaf_defqwc_slope_dev", std::abs(dl - 2.0), 0.3, 3, secs, "fitted slope " + std::to_string(dl));
    run.lower("leaf_forms_slope", fl, 1.7, 3, secs, "Gauss/Codazzi/Ricci on the leaf, 4th-order differences");
    run.info("leaf_system_finest", sys_r.back(), 3);
    run.info("leaf_forms_finest", forms_r.back(), 3);
    run.table(convergence_table("leaf_convergence", hs,
                                {{"leaf_system", sys_r}, {"leaf_defqwc", def_r}, {"leaf_forms", forms_r}}));
  });
  return run.report();
}

// ---------------------------------------------------------------- backlund-qc

Report scenario_backlund_qc(const RunOptions& opt) {
  Run run("backlund-qc", opt);
  const auto q = run.quadric(make_qc_diag({{0.5, 0.1}, {0.7, -0.1}, {0.4, 0.0}}));
  if (q.kind != Kind::QC) config_error("backlund-qc needs a quadric with center");
  const int n = q.n;
  const auto lm = build_lmap(q, opt.seed);
  const auto sys = make_system(q, lm);
  const cd z = run.complex("z", {1.0, 0.5});
  const auto ctx = make_context(q, lm, z);
  run.report().provenance["z"] = {z.real(), z.imag()};

  run.guard("qc_algebra", [&] {
    const auto t0 = Clock::now();
    const int samples = run.count("samples", 1000);
    std::mt19937_64 rng(opt.seed * 17 + 3);
    const auto back = mirrored(ctx);
    double inv = 0, post = 0, compact = 0;
    int used = 0;
    for (int i = 0; i < samples; ++i) {
      CVec V0, L0;
      random_state(sys, rng, V0, L0);
      const CMat R0 = random_orthogonal(n, rng()), R1 = random_orthogonal(n, rng());
      const auto aux = make_qc_aux(ctx, V0);
      if (std::abs(aux.U) < 1e-3) continue;
      const auto t = algebraic_transform(ctx, V0, L0, R0, R1);
      post = std::max(post, check_transform(ctx, V0, L0, R0, R1, t).max());
      const auto r = algebraic_transform(back, t.V, t.Lam, R1, R0);
      inv = std::max({inv, max_abs(r.V - V0), max_abs(r.Lam - L0)});
      CMat X = random_cvec(n * n, rng).reshaped(n, n);
      const CMat w = X - X.transpose();
      for (int j = 0; j < n; ++j) {
        const CMat a = riccati_dir_qc(ctx, aux, L0, R0, w, R1, j);
        const CMat b = riccati_dir_qc_expanded(ctx, V0, L0, R0, w, R1, j);
        compact = std::max(compact, max_abs(a - b) / std::max(1.0, max_abs(b)));
      }
      ++used;
    }
    const double secs = seconds_since(t0);
    run.upper("qc_involution", inv, 1e-10, used, secs);
    run.upper("qc_transform_postconditions", post, 1e-10, used, secs);
    run.upper("qc_compact_vs_expanded", compact, 1e-12, used, secs);
  });

  run.guard("qc_line", [&] {
    const auto t0 = Clock::now();
    QCLineSeed sd;
    const double sc = 0.3;
    sd.R0base = random_orthogonal(n, opt.seed * 7 + 9, sc);
    std::mt19937_64 rng(opt.seed * 5 + 1);
    const CMat X = random_cvec(n * n, rng, sc).reshaped(n, n);
    sd.K = X - X.transpose();
    sd.alpha = CVec::Constant(n, cd(0.3, 0.1) * sc);
    sd.beta = CVec::Constant(n, cd(-0.2, 0.05) * sc);
    CVec V0 = CVec::Zero(n), L0 = CVec::Zero(n);
    for (int j = 0; j < n; ++j) V0(j) = 0.1 + 0.05 * j;
    L0(0) = cd(0.3, 0.4);
    complete_lambda(sys, V0, L0);
    const CMat R1b = random_orthogonal(n, opt.seed * 7 + 11, sc);
    const double len = run.num("line_length", 0.32);
    std::vector<double> hs, leaf;
    double drift = 0, prime = 0;
    for (double hk : {0.02, 0.01, 0.005}) {
      const auto r = integrate_qc_line(ctx, sd, V0, L0, R1b, hk, static_cast<int>(std::lround(len / hk)) + 1);
      if (r.reached < static_cast<int>(std::lround(len / hk)) + 1) throw Error(Errc::UNearZero, "line not completed");
      hs.push_back(hk);
      leaf.push_back(r.leaf_line);
      drift = std::max(drift, r.orth_drift);
      prime = std::max(r.prime0, r.prime1);  // finest step wins
    }
    const double secs = seconds_since(t0);
    const double sl = fitted_slope(hs, leaf);
    run.upper("qc_orth_drift", drift, 1e-6, 3, secs);
    run.upper("qc_prime_integral", prime, 1e-8, 3, secs);
    run.upper("qc_leaf_slope_dev", std::abs(sl - 2.0), 0.3, 3, secs, "fitted slope " + std::to_string(sl));
    run.table(convergence_table("qc_line_convergence", hs, {{"leaf_line", leaf}}));
  });
  return run.report();
}

// ---------------------------------------------------------------- leaf-embed

Report scenario_leaf_embed(const RunOptions& opt) {
  Run run("leaf-embed", opt);
  const cd z = run.complex("z", {0.3, 0.2});

  run.guard("acpia", [&] {
    const auto t0 = Clock::now();
    const auto s = default_seed(run, 2);
    if (s.q.n != 2 || s.q.kind != Kind::QWC) config_error("acpia check integrates frames for n = 2 QWC");
    const auto ctx = make_context(s.q, s.lm, z);
    const double h = run.num("h", 0.01);
    const int cnt = run.count("count", 32, 9);
    const auto g = make_grid(2, 0.0, h, cnt);
    const ZeroSolitonExact ex(s.sys, g.point(0), s.V, s.Lam);
    const auto zs = zero_soliton(s.sys, g, s.V, s.Lam, default_order(2), opt.threads);
    const auto fr = seed_embedding_n2(s.q, s.lm, ex, g, opt.threads);
    const auto r1 = integrate_backlund_qwc(ctx, g, identity_seed(2), random_orthogonal(2, opt.seed * 1000 + 5),
                                           opt.threads);
    const auto f1 = transform_field(ctx, zs.field, r1.R1);
    const auto e = leaf_embed(s.q, s.lm, ctx, fr, zs.field, f1);
    const auto nodes = interior_nodes(g, run.count("margin", 2, 0));
    const double secs = seconds_since(t0);
    run.upper("acpia_metric", acpia_residual(g, e, 4, nodes), 1e-6, nodes.size(), secs);
    run.upper("joined_forms", joined_forms_residual(s.q, s.lm, g, fr, zs.field, e, 4, nodes), 1e-6, nodes.size(),
              secs);
    run.info("seed_frame_path_mismatch", fr.mismatch, g.nodes());

    const auto ff0 = forms_assemble(s.q, s.lm, zs.field, opt.seed, 4, true);
    const auto ff1 = forms_assemble(s.q, s.lm, f1, opt.seed, 4, true);
    run.upper("asymptotic_correspondence",
              std::max(asymptotic_correspondence(ff0, nodes), asymptotic_correspondence(ff1, nodes)), 1e-8,
              nodes.size(), secs);
    auto bent = ff1;
    std::mt19937_64 rng(opt.seed * 3 + 17);
    for (auto& hm : bent.h) hm += random_cvec(static_cast<int>(hm.size()), rng, 0.3).reshaped(hm.rows(), hm.cols());
    run.lower("asymptotic_negative_control", asymptotic_correspondence(bent, nodes), 1e-3, nodes.size(), secs);
  });

  run.guard("degenerate_seed", [&] {
    const auto t0 = Clock::now();
    RulingCheck worst;
    worst.control = std::numeric_limits<double>::infinity();
    long total = 0;
    double drift = 0;
    for (int n : {2, 3}) {
      const auto s = default_seed(run, n);
      const auto ctx = make_context(s.q, s.lm, z);
      const double h = n == 2 ? 0.02 : 0.02;
      const int cnt = n == 2 ? 32 : 12;
      const auto g = make_grid(n, 0.0, h, cnt);
      const auto zs = zero_soliton(s.sys, g, s.V, s.Lam, default_order(n), opt.threads);
      auto r1 =
          integrate_backlund_qwc(ctx, g, identity_seed(n), random_orthogonal(n, opt.seed * 1000 + n), opt.threads);
      drift = std::max(drift, r1.drift);
      // The facet identities are pointwise statements for R₁ in O_n.
      for (auto& m : r1.R1) m = orth_project(m);
      const auto f1 = transform_field(ctx, zs.field, r1.R1);
      const auto fr = degenerate_seed_frame(s.q, s.lm, zs.field);
      const auto e = leaf_embed(s.q, s.lm, ctx, fr, zs.field, f1);
      for (int i = 0; i < g.nodes(); ++i) {
        const auto c = ruling_facet_check(s.q, s.lm, ctx, zs.field.V[i], zs.field.Lam[i], zs.field.R[i], r1.R1[i],
                                          opt.seed * 100003 + i);
        worst.on_confocal = std::max({worst.on_confocal, c.on_confocal,
                                      std::abs(eval_confocal(s.q, z, e.x1[i].head(s.q.n + 1)))});
        worst.ivory_match = std::max(worst.ivory_match, c.ivory_match);
        worst.isotropy = std::max(worst.isotropy, c.isotropy);
        worst.ruling = std::max(worst.ruling, c.ruling);
        worst.alignment = std::max(worst.alignment, c.alignment);
        worst.control = std::min(worst.control, c.control);
      }
      total += g.nodes();
    }
    const double secs = seconds_since(t0);
    run.upper("confocal_counterpart", worst.on_confocal, 1e-8, total, secs);
    run.upper("ruling_condition", worst.ruling, 1e-8, total, secs);
    run.upper("facet_isotropy", worst.isotropy, 1e-12, total, secs);
    run.upper("ruling_null_alignment", worst.alignment, 1e-8, total, secs);
    run.info("degenerate_leaf_drift", drift, total, "removed by projection before the pointwise checks");
    run.lower("ruling_negative_control", worst.control, 1e-4, total, secs, "smallest ratio for random directions");
  });
  return run.report();
}

// ---------------------------------------------------------------- bpt / m3 / lattice

struct Integrated {
  GridSpec g;
  std::vector<CMat> R0;
  std::vector<BacklundContext> ctx;
  std::vector<std::vector<CMat>> single;
  std::vector<LatticeParam> params;
};

Integrated integrate_family(const SeedSetup& s, const std::vector<cd>& zs, double h, int cnt, std::uint64_t seed,
                            int threads) {
  Integrated out;
  const int n = s.q.n;
  out.g = make_grid(n, 0.0, h, cnt);
  out.R0.assign(out.g.nodes(), CMat::Identity(n, n));
  for (size_t k = 0; k < zs.size(); ++k) {
    const auto c = make_context(s.q, s.lm, zs[k]);
    out.ctx.push_back(c);
    out.params.push_back({zs[k], c.D});
    auto r = integrate_backlund_qwc(c, out.g, identity_seed(n), random_orthogonal(n, seed * 1000 + 100 + k), threads).R1;
    for (auto& m : r) m = orth_project(m);
    out.single.push_back(std::move(r));
  }
  return out;
}

std::vector<cd> distinct_zs(const Run& run, const std::string& key, const std::vector<cd>& def, size_t need) {
  const auto zs = run.complex_list(key, def);
  if (zs.size() < need) config_error(key + " needs " + std::to_string(need) + " values");
  for (size_t i = 0; i < zs.size(); ++i)
    for (size_t j = i + 1; j < zs.size(); ++j)
      if (std::abs(zs[i] - zs[j]) < 1e-12) config_error(key + " values must be pairwise distinct");
  return zs;
}

const std::vector<cd> kDefaultZ = {{0.3, 0.2}, {0.5, -0.1}, {-0.4, 0.3}, {0.2, -0.35}};

std::vector<unsigned> grid_targets(int a_count, int b_count) {
  // Parameters 0..1 form one direction, 2..3 the other.
  std::vector<unsigned> t;
  for (int i = 0; i <= a_count; ++i)
    for (int j = 0; j <= b_count; ++j) {
      unsigned T = 0;
      for (int a = 0; a < i; ++a) T |= 1u << a;
      for (int b = 0; b < j; ++b) T |= 1u << (2 + b);
      t.push_back(T);
    }
  return t;
}

double lattice_order_gap(const Integrated& I, const std::vector<unsigned>& targets, Lattice* keep) {
  const auto A = lattice_build(I.R0, I.single, I.params, targets, {0, 1, 2, 3});
  const auto B = lattice_build(I.R0, I.single, I.params, targets, {2, 3, 0, 1});
  double d = 0;
  for (unsigned T : targets) {
    if (!A.sites.count(T) || !B.sites.count(T)) return std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < A.sites.at(T).size(); ++i) d = std::max(d, max_abs(A.sites.at(T)[i] - B.sites.at(T)[i]));
  }
  if (keep) *keep = A;
  return d;
}

Report scenario_bpt(const RunOptions& opt) {
  Run run("bpt", opt);
  const auto zs = distinct_zs(run, "z", kDefaultZ, 2);
  const auto s = default_seed(run, run.count("n", 2, 2));
  const int n = s.q.n;

  run.guard("bpt_random", [&] {
    const auto t0 = Clock::now();
    const int samples = run.count("samples", 1000);
    std::mt19937_64 rng(opt.seed * 19 + 2);
    double orth = 0, scalar = 0, ident = 0;
    for (int t = 0; t < samples; ++t) {
      cd z1 = random_cd(rng, 0.5), z2 = random_cd(rng, 0.5);
      if (std::abs(z1 - z2) < 0.05) z2 += 0.1;
      const auto c1 = make_context(s.q, s.lm, z1), c2 = make_context(s.q, s.lm, z2);
      const CMat R0 = random_orthogonal(n, rng()), R1 = random_orthogonal(n, rng()), R2 = random_orthogonal(n, rng());
      const CMat R3 = bpt_compose(R0, R1, R2, c1.D, c2.D);
      orth = std::max(orth, orth_defect(R3));
      scalar = std::max(scalar, bpt_scalar_residual(R0, R1, R2, R3, c1.D, c2.D, z1, z2));
      ident = std::max(ident, bpt_orth_identity(R1, R2, c1.D, c2.D));
    }
    const double secs = seconds_since(t0);
    run.upper("bpt_orthogonality", orth, 1e-10, samples, secs);
    run.upper("bpt_scalar_identity", scalar, 1e-10, samples, secs);
    run.upper("bpt_orth_identity", ident, 1e-12, samples, secs);
  });

  run.guard("bpt_grid", [&] {
    const auto t0 = Clock::now();
    std::vector<double> hs, ric, deriv, scal;
    for (int k = 0; k < 3; ++k) {
      const double hk = 0.04 / (1 << k);
      const auto I = integrate_family(s, {zs[0], zs[1]}, hk, 8 * (1 << k) + 1, opt.seed, opt.threads);
      std::vector<CMat> R3(I.g.nodes());
      for (int i = 0; i < I.g.nodes(); ++i)
        R3[i] = bpt_compose(I.R0[i], I.single[0][i], I.single[1][i], I.params[0].D, I.params[1].D);
      const auto rep = bpt_verify(I.ctx[0], I.ctx[1], I.g, I.R0, I.single[0], I.single[1], R3, 2,
                                  fixed_nodes(I.g, 0.08, 0.08, 0.24));
      hs.push_back(hk);
      ric.push_back(std::max(rep.riccati_1, rep.riccati_2));
      deriv.push_back(rep.derivative);
      scal.push_back(std::max(rep.scalar, rep.orth));
    }
    const double secs = seconds_since(t0);
    const double sl = fitted_slope(hs, ric);
    run.upper("bpt_riccati_slope_dev", std::abs(sl - 2.0), 0.3, 3, secs, "fitted slope " + std::to_string(sl));
    run.upper("bpt_grid_algebra", *std::max_element(scal.begin(), scal.end()), 1e-10, 3, secs);
    run.info("bpt_derivative_identity_finest", deriv.back(), 3);
    run.table(convergence_table("bpt_convergence", hs, {{"riccati", ric}, {"derivative_identity", deriv}}));
  });

  run.guard("lattice_order", [&] {
    if (zs.size() < 4) config_error("lattice order check needs four z values");
    const auto t0 = Clock::now();
    const auto I = integrate_family(s, zs, 0.02, 17, opt.seed, opt.threads);
    const auto targets = grid_targets(2, 2);
    run.upper("lattice_order_independence", lattice_order_gap(I, targets, nullptr), 1e-9, targets.size(),
              seconds_since(t0));
  });
  return run.report();
}

Report scenario_m3(const RunOptions& opt) {
  Run run("m3", opt);
  const auto zs = distinct_zs(run, "z", {kDefaultZ[0], kDefaultZ[1], kDefaultZ[2]}, 3);
  const auto s = default_seed(run, run.count("n", 2, 2));
  const int n = s.q.n;

  run.guard("m3_degenerate", [&] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(opt.seed * 23 + 1);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
      const CMat R = random_orthogonal(n, rng()), R0 = random_orthogonal(n, rng());
      cd z[3];
      CMat D[3];
      for (int k = 0; k < 3; ++k) {
        z[k] = random_cd(rng, 0.5) + 0.3 * k;
        D[k] = make_context(s.q, s.lm, z[k]).D;
      }
      // Coincident leaves degenerate every square; compare the formula routes on R₁ = R₂ = R₄ ≠ R₀.
      const auto m = m3_r7(R0, R, R, R, D[0], D[1], D[2], z[0], z[1], z[2]);
      worst = std::max(worst, m.discrepancy);
    }
    run.upper("m3_symmetric_input", worst, 1e-12, 100, seconds_since(t0));
  });

  run.guard("m3_integrated", [&] {
    const auto t0 = Clock::now();
    const auto I = integrate_family(s, {zs[0], zs[1], zs[2]}, 0.02, 17, opt.seed, opt.threads);
    double worst = 0;
    for (int i = 0; i < I.g.nodes(); ++i) {
      const auto m = m3_r7(I.R0[i], I.single[0][i], I.single[1][i], I.single[2][i], I.params[0].D, I.params[1].D,
                           I.params[2].D, zs[0], zs[1], zs[2]);
      worst = std::max(worst, m.discrepancy);
    }
    run.upper("m3_integrated", worst, 1e-8, I.g.nodes(), seconds_since(t0));
    std::vector<unsigned> cube;
    for (unsigned T = 0; T < 8; ++T) cube.push_back(T);
    const auto L = lattice_build(I.R0, I.single, I.params, cube, {0, 1, 2});
    const auto lc = lattice_check(L, I.params);
    run.upper("cube_closure", lc.cubes, 1e-8, lc.n_cubes, seconds_since(t0));
    run.upper("cube_holes", static_cast<double>(L.holes.size()), 0.5, 8, seconds_since(t0));
  });
  return run.report();
}

Report scenario_lattice(const RunOptions& opt) {
  Run run("lattice", opt);
  const auto zs = distinct_zs(run, "z", kDefaultZ, 4);
  const auto s = default_seed(run, run.count("n", 2, 2));
  run.guard("lattice", [&] {
    const auto t0 = Clock::now();
    const auto I = integrate_family(s, zs, run.num("h", 0.02), run.count("count", 17, 3), opt.seed, opt.threads);
    const auto targets = grid_targets(2, 2);
    Lattice L;
    const double gap = lattice_order_gap(I, targets, &L);
    const auto lc = lattice_check(L, I.params);
    const double secs = seconds_since(t0);
    run.upper("lattice_order_independence", gap, 1e-9, targets.size(), secs);
    run.upper("lattice_squares", lc.squares, 1e-10, lc.n_squares, secs);
    run.upper("lattice_holes", static_cast<double>(L.holes.size()), 0.5, targets.size(), secs);
    Table t{"lattice_heatmap", {"steps_first", "steps_second", "orth_defect"}, {}};
    for (unsigned T : targets) {
      double d = 0;
      for (const auto& m : L.sites.at(T)) d = std::max(d, orth_defect(m));
      t.rows.push_back({static_cast<double>(std::popcount(T & 3u)), static_cast<double>(std::popcount(T & 12u)), d});
    }
    run.table(t);
  });
  return run.report();
}

// ---------------------------------------------------------------- sine-gordon

Report scenario_sine_gordon(const RunOptions& opt) {
  Run run("sine-gordon", opt);
  const int fields = run.count("fields", 20);
  const double h = run.num("h", 0.025);
  const int cnt = run.count("count", 41, 9);
  const double a1 = run.num("a1_inverse", 1.5);
  CMat Apn = CMat::Zero(2, 2);
  Apn(0, 0) = a1;
  Apn(1, 1) = a1 - 1.0;
  run.guard("sine_gordon", [&] {
    const auto t0 = Clock::now();
    const auto g = make_grid(2, 0.0, h, cnt);
    std::mt19937_64 rng(opt.seed * 29 + 4);
    std::normal_distribution<double> nd;
    double worst = 1;
    cd mean = 0;
    Table t{"sine_gordon_fields", {"field", "correlation", "constant_re", "constant_im"}, {}};
    for (int f = 0; f < fields; ++f) {
      double c[3], p0[3], p1[3], th[3];
      for (int k = 0; k < 3; ++k) {
        c[k] = nd(rng);
        p0[k] = 2 * nd(rng);
        p1[k] = 2 * nd(rng);
        th[k] = nd(rng);
      }
      std::vector<double> phi(g.nodes());
      for (int i = 0; i < g.nodes(); ++i) {
        const auto u = g.point(i);
        double v = 0;
        for (int k = 0; k < 3; ++k) v += c[k] * std::sin(p0[k] * u(0) + p1[k] * u(1) + th[k]);
        phi[i] = v;
      }
      const auto fit = sine_gordon_fit(g, phi, Apn, 4, 2);
      worst = std::min(worst, fit.correlation);
      mean += fit.constant / static_cast<double>(fields);
      t.rows.push_back({static_cast<double>(f), fit.correlation, fit.constant.real(), fit.constant.imag()});
    }
    const double secs = seconds_since(t0);
    run.lower("sine_gordon_correlation", worst, 0.999, fields, secs);
    run.info("sine_gordon_constant_re", mean.real(), fields);
    run.info("sine_gordon_constant_im", mean.imag(), fields);
    run.table(t);
  });
  return run.report();
}

const std::map<std::string, Scenario>& registry() {
  static const std::map<std::string, Scenario> r = {
      {"ivory-check", scenario_ivory},        {"elliptic", scenario_elliptic},
      {"deform-0soliton", scenario_zero_soliton}, {"backlund-qwc", scenario_backlund_qwc},
      {"backlund-qc", scenario_backlund_qc},  {"leaf-embed", scenario_leaf_embed},
      {"bpt", scenario_bpt},                  {"m3", scenario_m3},
      {"lattice", scenario_lattice},          {"sine-gordon", scenario_sine_gordon},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

Report run_scenario(const std::string& name, const RunOptions& opt) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) config_error("unknown scenario '" + name + "'");
  const auto t0 = Clock::now();
  Report rep = it->second(opt);
  rep.provenance["wall_seconds"] = seconds_since(t0);
  return rep;
}

}  // namespace bq
