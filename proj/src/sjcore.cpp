#include "bq/sjcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace bq {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ZeroEigenvalue: return "ZeroEigenvalue";
    case Errc::SingularConfocal: return "SingularConfocal";
    case Errc::IsotropicEncounter: return "IsotropicEncounter";
    case Errc::OffQuadric: return "OffQuadric";
    case Errc::NotRulingDirection: return "NotRulingDirection";
    case Errc::MultipleRoot: return "MultipleRoot";
    case Errc::ChartSingularity: return "ChartSingularity";
    case Errc::IsotropicNormal: return "IsotropicNormal";
    case Errc::PrimeIntegralViolation: return "PrimeIntegralViolation";
    case Errc::StepFailure: return "StepFailure";
    case Errc::ClosureViolation: return "ClosureViolation";
    case Errc::UNearZero: return "UNearZero";
    case Errc::DriftExceeded: return "DriftExceeded";
    case Errc::SingularSuperposition: return "SingularSuperposition";
    case Errc::SingularBox: return "SingularBox";
    case Errc::DistinctZRequired: return "DistinctZRequired";
    case Errc::DegenerateLambda: return "DegenerateLambda";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::MissingRun: return "MissingRun";
  }
  return "Unknown";
}

int SJSpec::dim() const {
  int m = 0;
  for (const auto& b : blocks) m += b.p;
  return m;
}

cd branch_sqrt(cd a) {
  const double r = std::abs(a);
  if (r == 0.0) return cd(0.0, 0.0);
  double t = std::arg(a);  // (−π, π]
  if (t >= std::numbers::pi) t = -std::numbers::pi;
  return std::polar(std::sqrt(r), 0.5 * t);
}

double binom(double alpha, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (alpha - i) / (i + 1);
  return c;
}

CVec unit_vector(int j, int m) {
  CVec v = CVec::Zero(m);
  v(j - 1) = 1.0;
  return v;
}

CVec isotropic_vector(int j, int m) {
  CVec v = CVec::Zero(m);
  v(2 * j - 2) = 0.5 * std::numbers::sqrt2;
  v(2 * j - 1) = cd(0.0, 0.5 * std::numbers::sqrt2);
  return v;
}

CMat nilpotent_block(int p) {
  if (p < 1) throw Error(Errc::InvalidArgument, "block size must be >= 1");
  CMat J = CMat::Zero(p, p);
  if (p == 1) return J;
  const int k = p / 2;
  // g_j = √2 f_j keeps the even-block entries exactly ±1/2, ±i/2.
  auto g = [p](int j) {
    CVec v = CVec::Zero(p);
    v(2 * j - 2) = 1.0;
    v(2 * j - 1) = cd(0.0, 1.0);
    return v;
  };
  auto add_sym = [&](const CVec& a, const CVec& b, double s) {
    J += s * (a * b.transpose());
    J += s * (b * a.transpose());
  };
  for (int j = 1; j < k; ++j) add_sym(g(j), g(j + 1).conjugate(), 0.5);
  if (p % 2 == 0) {
    J += 0.5 * (g(k) * g(k).transpose());
  } else {
    add_sym(g(k), unit_vector(p, p), 0.5 * std::numbers::sqrt2);
  }
  return J;
}

CMat build_sj(const SJSpec& spec) {
  const int m = spec.dim();
  CMat A = CMat::Zero(m, m);
  int off = 0;
  for (const auto& b : spec.blocks) {
    if (b.p < 1) throw Error(Errc::InvalidArgument, "block size must be >= 1");
    A.block(off, off, b.p, b.p) = b.a * CMat::Identity(b.p, b.p) + nilpotent_block(b.p);
    off += b.p;
  }
  return A;
}

CMat sqrt_affine_block(cd c, cd d, int p) {
  if (std::abs(c) == 0.0) throw Error(Errc::ZeroEigenvalue, "square root of a nilpotent block");
  const CMat J = nilpotent_block(p);
  CMat S = CMat::Zero(p, p);
  CMat Jk = CMat::Identity(p, p);
  cd ratio = d / c;
  cd coef = 1.0;
  for (int j = 0; j < p; ++j) {
    S += binom(0.5, j) * coef * Jk;
    Jk = Jk * J;
    coef *= ratio;
  }
  return branch_sqrt(c) * S;
}

CMat sqrt_sj(const SJSpec& spec) {
  const int m = spec.dim();
  CMat S = CMat::Zero(m, m);
  int off = 0;
  for (const auto& b : spec.blocks) {
    if (b.a == cd(0.0, 0.0)) throw Error(Errc::ZeroEigenvalue, "block with eigenvalue 0");
    S.block(off, off, b.p, b.p) = sqrt_affine_block(b.a, 1.0, b.p);
    off += b.p;
  }
  return S;
}

CMat sqrt_resolvent(const SJSpec& spec, cd z) {
  const int m = spec.dim();
  CMat S = CMat::Zero(m, m);
  int off = 0;
  for (const auto& b : spec.blocks) {
    const cd c = 1.0 - z * b.a;
    if (std::abs(c) < 1e-14) throw Error(Errc::SingularConfocal, "1 - z a_j = 0");
    S.block(off, off, b.p, b.p) = sqrt_affine_block(c, -z, b.p);
    off += b.p;
  }
  return S;
}

CMat sqrt_cyclic_block(int p) {
  if (p < 2) throw Error(Errc::InvalidArgument, "cyclic block needs p >= 2");
  const CVec fb = isotropic_vector(1, p).conjugate();
  const CMat M = nilpotent_block(p) + fb * fb.transpose();
  std::vector<CMat> powers(p);
  powers[0] = CMat::Identity(p, p);
  for (int j = 1; j < p; ++j) powers[j] = powers[j - 1] * M;
  CMat S = CMat::Zero(p, p);
  for (int k = 0; k < p; ++k) {
    const cd w = std::polar(1.0, 2.0 * std::numbers::pi * k / p);
    CMat P = CMat::Zero(p, p);
    for (int j = 0; j < p; ++j) P += std::pow(w, -j) * powers[j];
    S += branch_sqrt(w) * P / static_cast<double>(p);
  }
  return 0.5 * (S + S.transpose());
}

cd random_cd(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return scale * cd(re, im);
}

CVec random_cvec(int m, std::mt19937_64& rng, double scale) {
  CVec v(m);
  for (int i = 0; i < m; ++i) v(i) = random_cd(rng, scale);
  return v;
}

CMat orth_complete(const std::vector<CVec>& rows, int m, std::uint64_t seed, int max_retries) {
  const double tol = 1e-8;
  std::vector<CVec> basis;
  for (const auto& r : rows) {
    if (r.size() != m) throw Error(Errc::InvalidArgument, "row length mismatch");
    const cd q = bsq(r);
    if (std::abs(q) < tol) throw Error(Errc::IsotropicEncounter, "prescribed row is isotropic");
    if (std::abs(q - 1.0) > tol) throw Error(Errc::InvalidArgument, "prescribed row is not unit");
    for (const auto& b : basis)
      if (std::abs(bdot(b, r)) > tol) throw Error(Errc::InvalidArgument, "prescribed rows not orthogonal");
    basis.push_back(r);
  }
  if (static_cast<int>(basis.size()) > m) throw Error(Errc::InvalidArgument, "too many rows");
  std::mt19937_64 rng(seed);
  int retries = 0;
  while (static_cast<int>(basis.size()) < m) {
    CVec v = random_cvec(m, rng);
    const double scale = v.squaredNorm();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= bdot(b, v) * b;
    const cd q = bsq(v);
    if (std::abs(q) < 1e-6 * scale) {
      if (++retries > max_retries) throw Error(Errc::IsotropicEncounter, "completion kept hitting isotropic vectors");
      continue;
    }
    basis.push_back(v / branch_sqrt(q));
  }
  CMat M(m, m);
  for (int i = 0; i < m; ++i) M.row(i) = basis[i].transpose();
  return M;
}

CMat random_orthogonal(int m, std::uint64_t seed, double scale) {
  if (m < 1) throw Error(Errc::InvalidArgument, "m must be >= 1");
  std::mt19937_64 rng(seed);
  CMat X(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) X(i, j) = random_cd(rng, scale);
  CMat K = X - X.transpose();
  return K.exp();
}

CMat orth_project(const CMat& m) {
  const CMat g = m.transpose() * m;
  return m * CMat(g.sqrt()).inverse();
}

double orth_defect(const CMat& m) {
  return max_abs(m.transpose() * m - CMat::Identity(m.cols(), m.cols()));
}

}  // namespace bq
