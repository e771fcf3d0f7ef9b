#include <doctest.h>

#include "bq/embed.hpp"

using namespace bq;

namespace {

struct Fixture {
  QuadricSpec q = make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)});
  LMap lm = build_lmap(q, 7);
  SystemData sys = make_system(q, lm);
  CVec V = (CVec(2) << 0.1, 0.2).finished();
  CVec L;
  Fixture() {
    L.resize(2);
    L(0) = cd(0.7, 0.9);
    L(1) = branch_sqrt(-system_h(sys, V) - L(0) * L(0));
  }
};

}  // namespace

TEST_CASE("peterson admissibility") {
  Fixture f;
  double r = -1;
  CHECK(peterson_admissible(f.sys, 1e-12, &r));
  CHECK(r == 0.0);
  auto s = f.sys;
  s.Apn(0, 1) = s.Apn(1, 0) = 0.1;
  CHECK_FALSE(peterson_admissible(s, 1e-12, &r));
  CHECK(r == doctest::Approx(0.1));
}

TEST_CASE("zero soliton: base constraint and degenerate lambda") {
  const auto q = make_qwc_diag({1.0, 1.0});
  const auto lm = build_lmap(q, 1);
  const auto sys = make_system(q, lm);
  const CVec V0 = CVec::Zero(2);
  CHECK(std::abs(system_h(sys, V0) - 1.0) < 1e-15);
  const auto g = make_grid(2, 0.0, 0.02, 8);
  CVec bad(2);
  bad << 0.5, 0.5;
  CHECK_THROWS_AS(zero_soliton(sys, g, V0, bad, default_order(2)), Error);
  CVec deg(2);
  deg << cd(0, 1), 0.0;
  try {
    zero_soliton(sys, g, V0, deg, default_order(2));
    FAIL("degenerate lambda accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::StepFailure);
  }
  CVec ok(2);
  ok << cd(0, std::cosh(0.4)), std::sinh(0.4);
  const auto zs = zero_soliton(sys, g, V0, ok, default_order(2));
  CHECK(zs.prime_drift < 1e-8);
}

TEST_CASE("zero soliton matches its closed form and converges at fourth order") {
  Fixture f;
  std::vector<double> err;
  for (int k = 0; k < 2; ++k) {
    const double h = 0.04 / (1 << k);
    const auto g = make_grid(2, 0.0, h, 8 * (1 << k) + 1);
    const auto zs = zero_soliton(f.sys, g, f.V, f.L, default_order(2));
    const ZeroSolitonExact ex(f.sys, g.point(0), f.V, f.L);
    double e = 0;
    for (int i = 0; i < g.nodes(); ++i) {
      CVec V, L;
      ex.eval(g.point(i), V, L);
      e = std::max({e, max_abs(V - zs.field.V[i]), max_abs(L - zs.field.Lam[i])});
      CHECK(std::abs(prime_residual(f.sys, V, L)) < 1e-12);
    }
    err.push_back(e);
    CHECK(residual_defqwc(g, zs.field.R, f.sys.Apn).max() < 1e-12);
  }
  CHECK(err[0] / err[1] > 12);
}

TEST_CASE("two-form residual detects a non-diagonal block") {
  const auto g = make_grid(2, 0.0, 0.05, 6);
  std::vector<CMat> R(g.nodes(), CMat::Identity(2, 2));
  CMat A = CMat::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = 0.5;
  CHECK(residual_defqwc(g, R, A).max() == 0.0);
  A(0, 1) = A(1, 0) = 0.1;
  CHECK(residual_defqwc(g, R, A).two_form == doctest::Approx(0.1));
}

TEST_CASE("forms on the zero soliton satisfy Gauss, Codazzi and Ricci") {
  Fixture f;
  const auto g = make_grid(2, 0.0, 0.01, 21);
  const auto zs = zero_soliton(f.sys, g, f.V, f.L, default_order(2));
  const auto ff = forms_assemble(f.q, f.lm, zs.field, 3);
  std::vector<int> nodes;
  for (int i = 0; i < g.nodes(); ++i)
    if (g.interior(i, 4)) nodes.push_back(i);
  const auto r = forms_check(ff, g, 4, nodes);
  CHECK(r.gauss < 1e-6);
  CHECK(r.codazzi < 1e-6);
  CHECK(r.ricci < 1e-6);
  CHECK(r.joined_orth < 1e-10);
  CHECK(r.syst0 < 1e-10);
  CHECK(ff.gamma_gap < 1e-6);
}

TEST_CASE("complete_first_row keeps the prescribed row") {
  CVec r(2);
  r << cd(0.6, 0.1), 0.0;
  r(1) = branch_sqrt(1.0 - r(0) * r(0));
  const CMat S = complete_first_row(r, 1, nullptr);
  CHECK(orth_defect(S) < 1e-14);
  CHECK(max_abs(S.row(0).transpose() - r) < 1e-15);
}

TEST_CASE("quadrature of exact and non-closed one-forms") {
  const auto g = make_grid(2, 0.0, 0.05, 11);
  std::vector<std::vector<CVec>> w(2, std::vector<CVec>(g.nodes()));
  auto F = [](const Eigen::VectorXd& u) { return cd(std::sin(u(0)) * std::exp(u(1)), 0.0); };
  for (int i = 0; i < g.nodes(); ++i) {
    const auto u = g.point(i);
    w[0][i] = CVec::Constant(1, std::cos(u(0)) * std::exp(u(1)));
    w[1][i] = CVec::Constant(1, std::sin(u(0)) * std::exp(u(1)));
  }
  const auto r = quadrature_1form(g, w, CVec::Constant(1, F(g.point(0))));
  double e = 0;
  for (int i = 0; i < g.nodes(); ++i) e = std::max(e, std::abs(r.x[i](0) - F(g.point(i))));
  CHECK(e < 1e-6);
  for (int i = 0; i < g.nodes(); ++i) w[1][i](0) += g.point(i)(0);
  try {
    quadrature_1form(g, w, CVec::Zero(1));
    FAIL("non-closed form accepted");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::ClosureViolation);
  }
}

TEST_CASE("sine-Gordon reduction is proportional to the finite-difference residual") {
  CMat Ap = CMat::Zero(2, 2);
  Ap(0, 0) = 1.5;
  Ap(1, 1) = 0.5;
  const auto g = make_grid(2, 0.0, 0.025, 41);
  std::vector<double> phi(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    const auto u = g.point(i);
    phi[i] = 0.7 * std::sin(1.3 * u(0) - 0.4 * u(1) + 0.2) + 0.3 * std::cos(2.1 * u(1));
  }
  const auto fit = sine_gordon_fit(g, phi, Ap, 4, 2);
  CHECK(fit.correlation > 0.999);
  CHECK(std::abs(fit.constant + 1.0) < 1e-2);
}
