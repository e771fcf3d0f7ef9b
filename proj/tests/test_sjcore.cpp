#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "bq/sjcore.hpp"

using namespace bq;

namespace {

SJSpec spec(std::initializer_list<SJBlock> b) { return SJSpec{std::vector<SJBlock>(b)}; }

}  // namespace

TEST_CASE("branch of the square root") {
  CHECK(std::abs(branch_sqrt(4.0) - 2.0) < 1e-15);
  // arg π is read as −π
  CHECK(std::abs(branch_sqrt(-4.0) - cd(0, -2)) < 1e-15);
  CHECK(std::abs(branch_sqrt(cd(0, 1)) - std::polar(1.0, M_PI / 4)) < 1e-15);
  for (double t : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
    const cd s = branch_sqrt(std::polar(2.0, t));
    CHECK(std::abs(s * s - std::polar(2.0, t)) < 1e-14);
    CHECK(std::arg(s) < M_PI / 2 + 1e-15);
    CHECK(std::arg(s) >= -M_PI / 2 - 1e-15);
  }
}

TEST_CASE("generalized binomial") {
  CHECK(binom(0.5, 0) == doctest::Approx(1.0));
  CHECK(binom(0.5, 1) == doctest::Approx(0.5));
  CHECK(binom(0.5, 2) == doctest::Approx(-0.125));
  CHECK(binom(-0.5, 3) == doctest::Approx(-0.3125));
}

TEST_CASE("build_sj oracle values") {
  CHECK(max_abs(build_sj(spec({{0.0, 1}}))) == 0.0);
  CMat J2 = build_sj(spec({{0.0, 2}}));
  CMat expect(2, 2);
  expect << 0.5, cd(0, 0.5), cd(0, 0.5), -0.5;
  CHECK(max_abs(J2 - expect) < 1e-15);
  CMat D = build_sj(spec({{2.0, 1}, {3.0, 1}}));
  CHECK(max_abs(D - CVec((CVec(2) << 2.0, 3.0).finished()).asDiagonal().toDenseMatrix()) < 1e-15);
}

TEST_CASE("nilpotent blocks are symmetric with exact nilpotency order") {
  for (int p = 1; p <= 5; ++p) {
    const CMat J = nilpotent_block(p);
    CHECK(max_abs(J - J.transpose()) == 0.0);
    CMat P = CMat::Identity(p, p);
    for (int k = 1; k < p; ++k) P = P * J;
    if (p > 1) CHECK(max_abs(P) > 1e-12);
    CHECK(max_abs(P * J) < 1e-14);
  }
}

TEST_CASE("sqrt_sj oracle values and squaring property") {
  CMat S = sqrt_sj(spec({{1.0, 2}}));
  CHECK(max_abs(S - (CMat::Identity(2, 2) + 0.5 * nilpotent_block(2))) < 1e-15);
  CHECK(std::abs(sqrt_sj(spec({{4.0, 1}}))(0, 0) - 2.0) < 1e-15);

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pd(1, 4);
  for (int t = 0; t < 200; ++t) {
    SJSpec s;
    int m = 0;
    while (m < 6) {
      const int p = pd(rng);
      s.blocks.push_back({random_cd(rng) + cd(0.2, 0), p});
      m += p;
    }
    const CMat M = sqrt_sj(s);
    CHECK(inf_norm(M * M - build_sj(s)) < 1e-12);
  }
}

TEST_CASE("sqrt_resolvent") {
  const auto s = spec({{1.0, 1}});
  CHECK(std::abs(sqrt_resolvent(s, 0.75)(0, 0) - 0.5) < 1e-15);
  const auto big = spec({{2.0, 2}, {cd(0.3, 1), 3}});
  CHECK(max_abs(sqrt_resolvent(big, 0.0) - CMat::Identity(5, 5)) < 1e-15);
  const cd z(0.4, -0.3);
  const CMat S = sqrt_resolvent(spec({{0.0, 2}}), z);
  CHECK(max_abs(S - (CMat::Identity(2, 2) - 0.5 * z * nilpotent_block(2))) < 1e-15);
  const CMat Sb = sqrt_resolvent(big, z);
  const CMat A = build_sj(big);
  CHECK(max_abs(Sb * Sb - (CMat::Identity(5, 5) - z * A)) < 1e-12);
  CHECK(max_abs(Sb * A - A * Sb) < 1e-12);
}

TEST_CASE("cyclic block square root") {
  for (int p = 2; p <= 4; ++p) {
    const CVec fb = isotropic_vector(1, p).conjugate();
    const CMat target = nilpotent_block(p) + fb * fb.transpose();
    const CMat S = sqrt_cyclic_block(p);
    CHECK(max_abs(S * S - target) < 1e-12);
  }
}

TEST_CASE("orth_complete") {
  const CMat M = orth_complete({unit_vector(1, 2)}, 2, 3);
  CHECK(orth_defect(M) < 1e-14);
  CHECK(max_abs(M.row(0) - unit_vector(1, 2).transpose()) < 1e-15);
  CHECK(orth_defect(orth_complete({}, 3, 9)) < 1e-12);
  CHECK(max_abs(orth_complete({}, 4, 9) - orth_complete({}, 4, 9)) == 0.0);
  CVec iso(3);
  iso << 1.0, cd(0, 1), 0.0;
  try {
    orth_complete({iso}, 3, 1);
    FAIL("isotropic row accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IsotropicEncounter);
  }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const CMat Q = random_orthogonal(5, rng());
    const CMat C = orth_complete({Q.row(0).transpose(), Q.row(1).transpose()}, 5, t);
    CHECK(orth_defect(C) < 1e-10);
    CHECK(max_abs(C.topRows(2) - Q.topRows(2)) < 1e-15);
  }
}

TEST_CASE("random_orthogonal") {
  CHECK(max_abs(random_orthogonal(3, 1, 0.0) - CMat::Identity(3, 3)) == 0.0);
  CHECK(orth_defect(random_orthogonal(2, 7)) < 1e-12);
  CHECK(max_abs(random_orthogonal(4, 7) - random_orthogonal(4, 7)) == 0.0);
  CHECK(max_abs(random_orthogonal(4, 7) - random_orthogonal(4, 8)) > 1e-3);
}

TEST_CASE("orth_project removes small defects") {
  const CMat Q = random_orthogonal(3, 5);
  CMat X = CMat::Random(3, 3);
  const CMat P = orth_project(Q + 1e-6 * X);
  CHECK(orth_defect(P) < 1e-13);
  CHECK(max_abs(P - Q) < 1e-5);
  CHECK(max_abs(orth_project(Q) - Q) < 1e-13);
  // exp of antisymmetric is orthogonal
  CMat K = CMat::Random(3, 3);
  CHECK(orth_defect(CMat((K - K.transpose()).exp())) < 1e-12);
}
