#include <doctest.h>

#include "bq/deform.hpp"
#include "bq/quadric.hpp"

using namespace bq;

namespace {

CVec vec(std::initializer_list<cd> v) {
  CVec out(v.size());
  int i = 0;
  for (cd x : v) out(i++) = x;
  return out;
}

QuadricSpec unit_sphere(int m) { return make_qc_diag(std::vector<cd>(m, 1.0)); }

}  // namespace

TEST_CASE("confocal family oracle values") {
  const auto s = unit_sphere(3);
  CHECK(std::abs(eval_confocal(s, 0.0, vec({1, 0, 0}))) < 1e-15);
  CHECK(std::abs(eval_confocal(s, 0.75, vec({0.5, 0, 0}))) < 1e-15);
  const auto parab = make_qwc_diag({1.0});
  CHECK(std::abs(eval_confocal(parab, 0.0, vec({1, 0.5}))) < 1e-15);
}

TEST_CASE("normal forms of the three kinds") {
  const auto qc = make_qc_diag({2.0, 3.0, 4.0});
  CHECK(max_abs(qc.B) == 0.0);
  CHECK(qc.C == cd(-1.0));
  const auto qwc = make_qwc_diag({2.0, 3.0});
  CHECK(max_abs(qwc.B + unit_vector(3, 3)) == 0.0);
  const auto iq = make_iqwc(2, {0.9});
  CHECK(max_abs(iq.B + isotropic_vector(1, 3).conjugate()) < 1e-15);
  CHECK(iq.b_block == 2);
  CHECK_THROWS_AS(make_qc_diag({1.0, 0.0}), Error);
}

TEST_CASE("ivory map oracle values") {
  const auto s = unit_sphere(3);
  const CVec x = vec({0.6, 0.8, 0});
  CHECK(max_abs(ivory_map(s, 0.0, x) - x) < 1e-15);
  const cd z(0.3, 0.1);
  CHECK(max_abs(ivory_map(s, z, x) - branch_sqrt(1.0 - z) * x) < 1e-14);
  const auto qwc = make_qwc_diag({2.0, 3.0});
  CHECK(max_abs(ivory_shift(qwc, z) - 0.5 * z * unit_vector(3, 3)) < 1e-15);
  const auto iq = make_iqwc(2, {0.9});
  const CVec f = isotropic_vector(1, 3);
  const CVec expect = 0.5 * z * f.conjugate() + z * z / 8.0 * f;
  CHECK(max_abs(ivory_shift(iq, z) - expect) < 1e-14);
  CHECK(std::abs(bdot(f.conjugate(), ivory_shift(iq, z)) - z * z / 8.0) < 1e-14);
  CHECK_THROWS_AS(ivory_map(s, z, vec({2, 0, 0})), Error);
}

TEST_CASE("ivory identities on random samples") {
  std::mt19937_64 rng(11);
  for (const auto& q : {make_qc_diag({2.0, cd(1.5, -0.2), 3.0, 0.7}), make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)}),
                        make_iqwc(2, {cd(0.9, 0.2), cd(0.6, -0.3)})}) {
    const auto lm = build_lmap(q, 3);
    for (int t = 0; t < 100; ++t) {
      const cd z = random_cd(rng, 0.35);
      const CVec a = sample_on_quadric(q, lm, rng), b = sample_on_quadric(q, lm, rng);
      CHECK(std::abs(eval_confocal(q, z, ivory_map(q, z, a))) < 1e-10);
      CHECK(ivory_theorem_residual(q, z, a, b) < 1e-10);
      CHECK(ivory_theorem_residual(q, z, a, a) < 1e-12);
      CHECK(ivory_theorem_residual(q, 0.0, a, b) < 1e-12);
      CHECK(tc_symmetry_residual(q, z, a, b) < 1e-10);
      const CVec w = ruling_direction(q, a, rng);
      CHECK(std::abs(bdot(w, q.A * w)) < 1e-10);
      CHECK(ruling_length_residual(q, z, a, w) < 1e-10);
      CHECK(ruling_length_residual(q, 0.0, a, w) < 1e-14);
      CHECK(segment_ruling_residual(q, z, a, b, w) < 1e-10);
      const CVec wh = polar_direction(q, a, w, rng);
      CHECK(polar_ruling_residual(q, z, a, w, wh) < 1e-10);
    }
  }
}

TEST_CASE("non-ruling direction is rejected") {
  const auto q = make_qc_diag({2.0, 1.5, 3.0});
  const auto lm = build_lmap(q, 1);
  std::mt19937_64 rng(5);
  const CVec a = sample_on_quadric(q, lm, rng);
  const CVec t = tangent_basis(q.A * a)[0];
  CHECK_THROWS_AS(ruling_length_residual(q, 0.2, a, t), Error);
}

TEST_CASE("Lame orthogonality and elliptic coordinates") {
  const auto q = make_qc_diag({2.0, cd(1.5, -0.2), 3.0});
  const auto lm = build_lmap(q, 2);
  std::mt19937_64 rng(8);
  int found = 0;
  for (int t = 0; t < 40; ++t) {
    const cd z1 = random_cd(rng, 0.3), z2 = random_cd(rng, 0.3) + 0.2;
    const auto x = intersect_confocal(q, z1, z2, sample_on_quadric(q, lm, rng));
    if (!x) continue;
    ++found;
    CHECK(confocal_orthogonality_residual(q, z1, z2, *x) < 1e-10);
  }
  CHECK(found > 20);
  CHECK_THROWS_AS(confocal_orthogonality_residual(q, 0.1, 0.1, sample_on_quadric(q, lm, rng)), Error);

  const CVec x0 = sample_on_quadric(q, lm, rng);
  const auto roots = elliptic_coordinates(q, x0);
  CHECK(roots.size() == 3);
  CHECK(std::abs(roots.front()) < 1e-10);
  const CVec xg = random_cvec(3, rng, 0.8);
  for (cd z : elliptic_coordinates(q, xg)) CHECK(std::abs(eval_confocal(q, z, xg)) < 1e-8);
}

TEST_CASE("chart oracle values") {
  const auto s = unit_sphere(3);
  const auto ls = build_lmap(s, 1);
  CHECK(max_abs(chart_to_ambient(s, ls, CVec::Zero(2)) + unit_vector(3, 3)) < 1e-15);
  const auto cn = chart_normal_h(s, ls, vec({0.3, -0.2}));
  CHECK(max_abs(cn.N - chart_to_ambient(s, ls, vec({0.3, -0.2}))) < 1e-14);

  const auto parab = make_qwc_diag({1.0});
  const auto lp = build_lmap(parab, 1);
  CHECK(max_abs(lp.L - CMat::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(chart_to_ambient(parab, lp, vec({1})) - vec({1, 0.5})) < 1e-15);
  const auto cp = chart_normal_h(parab, lp, vec({0}));
  CHECK(std::abs(cp.H - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(cp.N(1)) - 1.0) < 1e-15);

  const auto q4 = make_qwc_diag({4.0});
  const auto l4 = build_lmap(q4, 1);
  CHECK(max_abs(l4.L - CVec((CVec(2) << 0.5, 1.0).finished()).asDiagonal().toDenseMatrix()) < 1e-15);
}

TEST_CASE("charts land on the quadric with unit tangent-orthogonal normal") {
  std::mt19937_64 rng(21);
  for (const auto& q : {make_qc_diag({2.0, cd(1.5, -0.2), 3.0}), make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)}),
                        make_iqwc(2, {cd(0.9, 0.2)}), make_iqwc(3, {cd(0.9, 0.2)})}) {
    const auto lm = build_lmap(q, 4);
    for (int t = 0; t < 20; ++t) {
      const CVec V = random_cvec(q.n, rng, 0.4);
      const CVec x = chart_to_ambient(q, lm, V);
      CHECK(std::abs(eval_confocal(q, 0.0, x)) < 1e-12);
      const auto cn = chart_normal_h(q, lm, V);
      CHECK(std::abs(bsq(cn.N) - 1.0) < 1e-12);
      const CMat J = chart_jacobian(q, lm, V);
      for (int k = 0; k < q.n; ++k) {
        CVec e = CVec::Zero(q.n);
        e(k) = 1e-6;
        const CVec fd = (chart_to_ambient(q, lm, V + e) - chart_to_ambient(q, lm, V - e)) / 2e-6;
        CHECK(max_abs(fd - J.col(k)) < 1e-8);
        CHECK(std::abs(bdot(cn.N, J.col(k))) < 1e-10);
      }
    }
  }
}

TEST_CASE("LMap invariants") {
  const std::vector<cd> zs = {{0.3, 0.2}, {-0.4, 0.1}};
  CHECK(check_lmap(make_iqwc(2, {}), build_lmap(make_iqwc(2, {}), 1), zs).max() < 1e-9);
  for (int p : {2, 3}) {
    const auto q = make_iqwc(p, {cd(0.9, 0.2)});
    const auto lm = build_lmap(q, 5, true);
    const auto r = check_lmap(q, lm, zs);
    CHECK(r.max() < 1e-9);
    CHECK(r.on_paraboloid < 1e-9);
  }
  const auto qwc = make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)});
  CHECK(check_lmap(qwc, build_lmap(qwc, 1), zs).max() < 1e-10);
}

TEST_CASE("reduced shift translation identity") {
  const auto q = make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)});
  const auto lm = build_lmap(q, 1);
  const cd z(0.2, -0.3);
  const CVec ilc = reduced_shift(q, lm, z).head(2);
  const CMat S = sqrt_reduced_resolvent(q, lm, z);
  const CVec lhs = (CMat::Identity(2, 2) + S) * ilc;
  CHECK(max_abs(lhs + z * lm.IB) < 1e-12);
}
