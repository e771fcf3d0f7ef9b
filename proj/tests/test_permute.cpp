#include <doctest.h>

#include "bq/permute.hpp"

using namespace bq;

namespace {

struct Setup {
  QuadricSpec q = make_qwc_diag({cd(1, 0.2), cd(0.5, -0.1)});
  LMap lm = build_lmap(q, 7);
  CMat D(cd z) const { return make_context(q, lm, z).D; }
};

}  // namespace

TEST_CASE("coincident leaves superpose to the seed") {
  Setup s;
  std::mt19937_64 rng(2);
  const CMat R0 = random_orthogonal(2, rng()), R = random_orthogonal(2, rng());
  const CMat R3 = bpt_compose(R0, R, R, s.D(cd(0.3, 0.2)), s.D(cd(0.5, -0.1)));
  CHECK(max_abs(R3 - R0) < 1e-12);
}

TEST_CASE("equal parameters with equal leaves are singular") {
  Setup s;
  const CMat R = CMat::Identity(2, 2), D = s.D(cd(0.3, 0.2));
  try {
    bpt_compose(CMat::Identity(2, 2), R, R, D, D);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularSuperposition);
  }
}

TEST_CASE("random superpositions stay orthogonal and satisfy the scalar identity") {
  Setup s;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const cd z1 = random_cd(rng, 0.5), z2 = random_cd(rng, 0.5) + 0.2;
    const CMat D1 = s.D(z1), D2 = s.D(z2);
    const CMat R0 = random_orthogonal(2, rng()), R1 = random_orthogonal(2, rng()), R2 = random_orthogonal(2, rng());
    const CMat R3 = bpt_compose(R0, R1, R2, D1, D2);
    CHECK(orth_defect(R3) < 1e-10);
    CHECK(bpt_scalar_residual(R0, R1, R2, R3, D1, D2, z1, z2) < 1e-10);
    CHECK(bpt_orth_identity(R1, R2, D1, D2) < 1e-12);
    // Swapping the two transforms gives the same fourth leaf.
    CHECK(max_abs(bpt_compose(R0, R2, R1, D2, D1) - R3) < 1e-10);
  }
}

TEST_CASE("M3 routes agree and reject repeated parameters") {
  Setup s;
  std::mt19937_64 rng(11);
  const cd z[3] = {cd(0.3, 0.2), cd(0.5, -0.1), cd(-0.4, 0.3)};
  for (int t = 0; t < 50; ++t) {
    const CMat R0 = random_orthogonal(2, rng()), R1 = random_orthogonal(2, rng()), R2 = random_orthogonal(2, rng()),
               R4 = random_orthogonal(2, rng());
    const auto m = m3_r7(R0, R1, R2, R4, s.D(z[0]), s.D(z[1]), s.D(z[2]), z[0], z[1], z[2]);
    CHECK(m.discrepancy < 1e-9);
    CHECK(orth_defect(m.R7) < 1e-9);
  }
  const CMat I = CMat::Identity(2, 2);
  try {
    m3_r7(I, I, I, I, s.D(z[0]), s.D(z[0]), s.D(z[2]), z[0], z[0], z[2]);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DistinctZRequired);
  }
}

TEST_CASE("lattice of constant leaves is order independent and closes") {
  Setup s;
  std::mt19937_64 rng(13);
  const cd zs[4] = {cd(0.3, 0.2), cd(0.5, -0.1), cd(-0.4, 0.3), cd(0.2, -0.35)};
  const int N = 3;
  std::vector<CMat> R0(N);
  std::vector<std::vector<CMat>> single(4, std::vector<CMat>(N));
  std::vector<LatticeParam> params;
  for (int i = 0; i < N; ++i) R0[i] = random_orthogonal(2, rng());
  for (int k = 0; k < 4; ++k) {
    params.push_back({zs[k], s.D(zs[k])});
    for (int i = 0; i < N; ++i) single[k][i] = random_orthogonal(2, rng());
  }
  std::vector<unsigned> all;
  for (unsigned T = 0; T < 16; ++T) all.push_back(T);
  const auto A = lattice_build(R0, single, params, all, {0, 1, 2, 3});
  const auto B = lattice_build(R0, single, params, all, {3, 1, 0, 2});
  CHECK(A.holes.empty());
  for (unsigned T : all)
    for (int i = 0; i < N; ++i) CHECK(max_abs(A.sites.at(T)[i] - B.sites.at(T)[i]) < 1e-8);
  const auto lc = lattice_check(A, params);
  CHECK(lc.squares < 1e-9);
  CHECK(lc.cubes < 1e-8);
  CHECK(lc.n_cubes > 0);
  CHECK(max_abs(A.sites.at(0)[0] - R0[0]) == 0.0);
  CHECK(max_abs(A.sites.at(1u << 2)[1] - single[2][1]) == 0.0);
}
