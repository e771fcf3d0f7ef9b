#include <doctest.h>

#include "bq/embed.hpp"

using namespace bq;

namespace {

void random_state(const SystemData& sys, std::mt19937_64& rng, CVec& V, CVec& L) {
  V = random_cvec(sys.n, rng, 0.3);
  L = random_cvec(sys.n, rng);
  L *= branch_sqrt(-system_h(sys, V)) / branch_sqrt(bsq(L));
}

struct Qwc {
  QuadricSpec q = make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)});
  LMap lm = build_lmap(q, 7);
  SystemData sys = make_system(q, lm);
  BacklundContext ctx = make_context(q, lm, cd(0.3, 0.2));
};

}  // namespace

TEST_CASE("context and mirror") {
  Qwc f;
  CHECK(context_residual(f.ctx) < 1e-13);
  const auto m = mirrored(f.ctx);
  CHECK(std::abs(m.sz + f.ctx.sz) < 1e-15);
  CHECK(max_abs(m.D + f.ctx.D) < 1e-15);
  CHECK(max_abs(m.SRp - f.ctx.SRp) == 0.0);
}

TEST_CASE("QWC Riccati right-hand side oracle values") {
  Qwc f;
  const CMat I = CMat::Identity(2, 2), Z = CMat::Zero(2, 2);
  for (int j = 0; j < 2; ++j) {
    // R₀ = R₁ = I, ω₀ = 0: −∂R₁ = E_jD − DE_j vanishes for diagonal D.
    CHECK(max_abs(riccati_dir_qwc(f.ctx, I, Z, I, j)) < 1e-15);
  }
  auto c = f.ctx;
  c.D(0, 1) = 0.3;
  CMat E = CMat::Zero(2, 2);
  E(0, 0) = 1;
  CHECK(max_abs(riccati_dir_qwc(c, I, Z, I, 0) + (E * c.D - c.D * E)) < 1e-15);
}

TEST_CASE("QWC transform: postconditions and involution") {
  Qwc f;
  std::mt19937_64 rng(3);
  const auto back = mirrored(f.ctx);
  for (int t = 0; t < 200; ++t) {
    CVec V0, L0;
    random_state(f.sys, rng, V0, L0);
    const CMat R0 = random_orthogonal(2, rng()), R1 = random_orthogonal(2, rng());
    const auto tr = algebraic_transform(f.ctx, V0, L0, R0, R1);
    CHECK(check_transform(f.ctx, V0, L0, R0, R1, tr).max() < 1e-10);
    const auto r = algebraic_transform(back, tr.V, tr.Lam, R1, R0);
    CHECK(max_abs(r.V - V0) < 1e-10);
    CHECK(max_abs(r.Lam - L0) < 1e-10);
  }
}

TEST_CASE("QC transform and compact Riccati") {
  const auto q = make_qc_diag({cd(0.5, 0.1), cd(0.7, -0.1), 0.4});
  const auto lm = build_lmap(q, 3);
  const auto sys = make_system(q, lm);
  const auto ctx = make_context(q, lm, cd(1, 0.5));
  const auto back = mirrored(ctx);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    CVec V0, L0;
    random_state(sys, rng, V0, L0);
    const CMat R0 = random_orthogonal(2, rng()), R1 = random_orthogonal(2, rng());
    const auto aux = make_qc_aux(ctx, V0);
    if (std::abs(aux.U) < 1e-3) continue;
    const auto tr = algebraic_transform(ctx, V0, L0, R0, R1);
    CHECK(check_transform(ctx, V0, L0, R0, R1, tr).max() < 1e-10);
    const auto r = algebraic_transform(back, tr.V, tr.Lam, R1, R0);
    CHECK(max_abs(r.V - V0) < 1e-10);
    CMat X = CMat::Random(2, 2);
    const CMat w = X - X.transpose();
    for (int j = 0; j < 2; ++j)
      CHECK(max_abs(riccati_dir_qc(ctx, aux, L0, R0, w, R1, j) - riccati_dir_qc_expanded(ctx, V0, L0, R0, w, R1, j)) <
            1e-12);
  }
}

TEST_CASE("QC auxiliary denominator at the south pole") {
  const auto q = make_qc_diag({1.0, 1.0, 1.0});
  const auto lm = build_lmap(q, 1);
  const cd z(0.4, 0.2);
  const auto ctx = make_context(q, lm, z);
  const auto aux = make_qc_aux(ctx, CVec::Zero(2));
  CHECK(std::abs(aux.U - (-branch_sqrt(1.0 - z) - 1.0)) < 1e-14);
  QCAux zero = aux;
  zero.U = 1e-12;
  const CMat I = CMat::Identity(2, 2);
  try {
    riccati_dir_qc(ctx, zero, CVec::Ones(2), I, CMat::Zero(2, 2), I, 0);
    FAIL("tiny U accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UNearZero);
  }
}

TEST_CASE("Riccati integration: orthogonality, path independence, leaf system") {
  Qwc f;
  CVec V(2), L(2);
  V << 0.1, 0.2;
  L(0) = cd(0.7, 0.9);
  L(1) = branch_sqrt(-system_h(f.sys, V) - L(0) * L(0));
  std::vector<double> mism, leaf;
  for (int k = 0; k < 2; ++k) {
    const double h = 0.04 / (1 << k);
    const auto g = make_grid(2, 0.0, h, 8 * (1 << k) + 1);
    const auto zs = zero_soliton(f.sys, g, V, L, default_order(2));
    const auto run = integrate_backlund_qwc(f.ctx, g, identity_seed(2), random_orthogonal(2, 5));
    CHECK(run.drift < 1e-6);
    mism.push_back(run.mismatch);
    const auto f1 = transform_field(f.ctx, zs.field, run.R1);
    std::vector<int> nodes;
    for (int i = 0; i < g.nodes(); ++i) {
      const auto u = g.point(i);
      if (u.minCoeff() > 0.079 && u.maxCoeff() < 0.241 && std::abs(u(0) / 0.08 - std::round(u(0) / 0.08)) < 1e-9 &&
          std::abs(u(1) / 0.08 - std::round(u(1) / 0.08)) < 1e-9)
        nodes.push_back(i);
    }
    leaf.push_back(system_residual_at(f.sys, f1, 2, nodes));
    CHECK(riccati_residual_qwc(f.ctx, g, zs.field.R, run.R1, 2, nodes) < 1e-2);
  }
  CHECK(mism[0] / mism[1] > 12);
  CHECK(leaf[0] / leaf[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("orthogonality defect of the initial value is carried, not amplified") {
  Qwc f;
  const auto g = make_grid(2, 0.0, 0.02, 12);
  const CMat base = random_orthogonal(2, 5) * (1.0 + 1e-7);
  const auto run = integrate_backlund_qwc(f.ctx, g, identity_seed(2), base, 1, false);
  CHECK(run.drift < 1e-5);
  CHECK(run.drift > 1e-8);
  CHECK_THROWS_AS(integrate_backlund_qwc(f.ctx, g, identity_seed(2), 1.01 * base), Error);
}

TEST_CASE("leaf embedding over an integrated seed frame keeps the metric") {
  Qwc f;
  CVec V(2), L(2);
  V << 0.1, 0.2;
  L(0) = cd(0.7, 0.9);
  L(1) = branch_sqrt(-system_h(f.sys, V) - L(0) * L(0));
  const auto g = make_grid(2, 0.0, 0.01, 20);
  const ZeroSolitonExact ex(f.sys, g.point(0), V, L);
  const auto zs = zero_soliton(f.sys, g, V, L, default_order(2));
  const auto fr = seed_embedding_n2(f.q, f.lm, ex, g);
  const auto run = integrate_backlund_qwc(f.ctx, g, identity_seed(2), random_orthogonal(2, 5));
  const auto f1 = transform_field(f.ctx, zs.field, run.R1);
  const auto e = leaf_embed(f.q, f.lm, f.ctx, fr, zs.field, f1);
  std::vector<int> nodes;
  for (int i = 0; i < g.nodes(); ++i)
    if (g.interior(i, 2)) nodes.push_back(i);
  CHECK(acpia_residual(g, e, 4, nodes) < 1e-6);
  CHECK(joined_forms_residual(f.q, f.lm, g, fr, zs.field, e, 4, nodes) < 1e-6);
  // Degenerate seed lands on the confocal quadric but is not isometric to the leaf.
  const auto dfr = degenerate_seed_frame(f.q, f.lm, zs.field);
  const auto de = leaf_embed(f.q, f.lm, f.ctx, dfr, zs.field, f1);
  for (int i : nodes) CHECK(std::abs(eval_confocal(f.q, f.ctx.z, de.x1[i])) < 1e-8);
  CHECK(acpia_residual(g, de, 4, nodes) > 1e-3);
}

TEST_CASE("ruling facet check on the degenerate seed") {
  for (int n : {2, 3}) {
    std::vector<cd> a = {cd(1, 0.2), cd(0.5, -0.1), cd(0.8, 0.1)};
    a.resize(n);
    const auto q = make_qwc_diag(a);
    const auto lm = build_lmap(q, 7);
    const auto sys = make_system(q, lm);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
      const auto c = make_context(q, lm, random_cd(rng, 0.5));
      CVec V0, L0;
      random_state(sys, rng, V0, L0);
      const auto r = ruling_facet_check(q, lm, c, V0, L0, random_orthogonal(n, rng()), random_orthogonal(n, rng()),
                                        rng());
      CHECK(r.on_confocal < 1e-10);
      CHECK(r.ivory_match < 1e-10);
      CHECK(r.isotropy < 1e-12);
      CHECK(r.ruling < 1e-10);
      CHECK(r.alignment < 1e-8);
      CHECK(r.control > 1e-4);
    }
  }
}
