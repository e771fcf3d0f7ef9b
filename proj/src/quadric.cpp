#include "bq/quadric.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bq {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::QC: return "QC";
    case Kind::QWC: return "QWC";
    case Kind::IQWC: return "IQWC";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  if (s == "QC") return Kind::QC;
  if (s == "QWC") return Kind::QWC;
  if (s == "IQWC") return Kind::IQWC;
  throw Error(Errc::ConfigError, "unknown quadric kind " + s);
}

QuadricSpec make_quadric(Kind kind, const SJSpec& sj) {
  QuadricSpec q;
  q.kind = kind;
  q.sj = sj;
  const int m = sj.dim();
  if (m < 2) throw Error(Errc::InvalidArgument, "ambient dimension must be >= 2");
  q.n = m - 1;
  q.A = build_sj(sj);
  auto is_zero = [](cd a) { return std::abs(a) == 0.0; };
  const auto& bl = sj.blocks;
  switch (kind) {
    case Kind::QC:
      for (const auto& b : bl)
        if (is_zero(b.a)) throw Error(Errc::InvalidArgument, "QC needs invertible A");
      q.B = CVec::Zero(m);
      q.C = -1.0;
      q.b_block = 0;
      break;
    case Kind::QWC:
      if (!(bl.back().p == 1 && is_zero(bl.back().a)))
        throw Error(Errc::InvalidArgument, "QWC needs trailing (0,1) block");
      for (size_t i = 0; i + 1 < bl.size(); ++i)
        if (is_zero(bl[i].a)) throw Error(Errc::InvalidArgument, "QWC kernel must be one-dimensional");
      q.B = -unit_vector(m, m);
      q.C = 0.0;
      q.b_block = 1;
      break;
    case Kind::IQWC:
      if (!(bl.front().p >= 2 && is_zero(bl.front().a)))
        throw Error(Errc::InvalidArgument, "IQWC needs leading (0,p>=2) block");
      for (size_t i = 1; i < bl.size(); ++i)
        if (is_zero(bl[i].a)) throw Error(Errc::InvalidArgument, "IQWC kernel must be one-dimensional");
      q.B = -isotropic_vector(1, m).conjugate();
      q.C = 0.0;
      q.b_block = bl.front().p;
      break;
  }
  // Bordered matrix must be nonsingular.
  CMat Bd(m + 1, m + 1);
  Bd.topLeftCorner(m, m) = q.A;
  Bd.topRightCorner(m, 1) = q.B;
  Bd.bottomLeftCorner(1, m) = q.B.transpose();
  Bd(m, m) = q.C;
  if (std::abs(Bd.determinant()) < 1e-12) throw Error(Errc::InvalidArgument, "degenerate bordered matrix");
  return q;
}

QuadricSpec make_qc_diag(const std::vector<cd>& a) {
  SJSpec s;
  for (cd v : a) s.blocks.push_back({v, 1});
  return make_quadric(Kind::QC, s);
}

QuadricSpec make_qwc_diag(const std::vector<cd>& a) {
  SJSpec s;
  for (cd v : a) s.blocks.push_back({v, 1});
  s.blocks.push_back({0.0, 1});
  return make_quadric(Kind::QWC, s);
}

QuadricSpec make_iqwc(int p, const std::vector<cd>& a_rest) {
  SJSpec s;
  s.blocks.push_back({0.0, p});
  for (cd v : a_rest) s.blocks.push_back({v, 1});
  return make_quadric(Kind::IQWC, s);
}

static void check_admissible(const QuadricSpec& q, cd z) {
  for (const auto& b : q.sj.blocks)
    if (std::abs(1.0 - z * b.a) < 1e-14) throw Error(Errc::SingularConfocal, "z is an inverse eigenvalue of A");
}

CMat resolvent(const QuadricSpec& q, cd z) {
  const int m = q.n + 1;
  return CMat::Identity(m, m) - z * q.A;
}

CMat resolvent_inv(const QuadricSpec& q, cd z) {
  check_admissible(q, z);
  return resolvent(q, z).partialPivLu().inverse();
}

CMat sqrt_resolvent(const QuadricSpec& q, cd z) { return sqrt_resolvent(q.sj, z); }

cd eval_confocal(const QuadricSpec& q, cd z, const CVec& x) {
  const CMat Ri = resolvent_inv(q, z);
  const CVec RB = Ri * q.B;
  return bdot(x, q.A * (Ri * x)) + 2.0 * bdot(RB, x) + q.C + z * bdot(q.B, RB);
}

CVec confocal_normal(const QuadricSpec& q, cd z, const CVec& x) {
  return resolvent_inv(q, z) * (q.A * x + q.B);
}

CVec ivory_shift(const QuadricSpec& q, cd z) {
  const int m = q.n + 1;
  CVec c = CVec::Zero(m);
  if (q.kind == Kind::QC) return c;
  // −½ Σ_k C(−½,k)(−1)^k z^{k+1}/(k+1) A^k B; A is nilpotent on the block of B.
  CVec AkB = q.B;
  cd zk = z;
  for (int k = 0; k < q.b_block; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c += (-0.5 * binom(-0.5, k) * sign / (k + 1)) * zk * AkB;
    AkB = q.A * AkB;
    zk *= z;
  }
  return c;
}

CVec ivory_map(const QuadricSpec& q, cd z, const CVec& x0, double tol_on) {
  const cd q0 = eval_confocal(q, 0.0, x0);
  if (std::abs(q0) > tol_on) throw Error(Errc::OffQuadric, "point not on Q_0");
  check_admissible(q, z);
  return sqrt_resolvent(q, z) * x0 + ivory_shift(q, z);
}

double ivory_theorem_residual(const QuadricSpec& q, cd z, const CVec& xa, const CVec& xb) {
  const CVec za = ivory_map(q, z, xa);
  const CVec zb = ivory_map(q, z, xb);
  return std::abs(bsq(zb - xa) - bsq(za - xb));
}

double tc_symmetry_residual(const QuadricSpec& q, cd z, const CVec& xa, const CVec& xb) {
  const CVec za = ivory_map(q, z, xa);
  const CVec zb = ivory_map(q, z, xb);
  const CVec na = q.A * xa + q.B;
  const CVec nb = q.A * xb + q.B;
  return std::abs(bdot(zb - xa, na) - bdot(za - xb, nb));
}

double ruling_length_residual(const QuadricSpec& q, cd z, const CVec& x0, const CVec& w0) {
  const double scale = std::max(1.0, w0.squaredNorm());
  const CVec n0 = q.A * x0 + q.B;
  if (std::abs(bdot(w0, q.A * w0)) > 1e-8 * scale || std::abs(bdot(w0, n0)) > 1e-8 * scale * std::max(1.0, n0.norm()))
    throw Error(Errc::NotRulingDirection, "w0 is not a tangent ruling");
  const CVec wz = sqrt_resolvent(q, z) * w0;
  return std::abs(bsq(wz) - bsq(w0));
}

double segment_ruling_residual(const QuadricSpec& q, cd z, const CVec& xa, const CVec& xb, const CVec& wa) {
  const CVec za = ivory_map(q, z, xa);
  const CVec zb = ivory_map(q, z, xb);
  const CVec wz = sqrt_resolvent(q, z) * wa;
  return std::abs(bdot(zb - xa, wa) + bdot(za - xb, wz));
}

double polar_ruling_residual(const QuadricSpec& q, cd z, const CVec& x0, const CVec& w, const CVec& what) {
  (void)x0;
  if (std::abs(bdot(w, q.A * what)) > 1e-8 * std::max(1.0, w.norm() * what.norm()))
    throw Error(Errc::NotRulingDirection, "directions are not polar");
  const CMat S = sqrt_resolvent(q, z);
  return std::abs(bdot(S * w, S * what) - bdot(w, what));
}

double confocal_orthogonality_residual(const QuadricSpec& q, cd z1, cd z2, const CVec& x) {
  if (std::abs(z1 - z2) < 1e-14) throw Error(Errc::InvalidArgument, "z1 == z2");
  const double s = std::max(1.0, x.norm());
  if (std::abs(eval_confocal(q, z1, x)) > 1e-8 * s * s || std::abs(eval_confocal(q, z2, x)) > 1e-8 * s * s)
    throw Error(Errc::OffQuadric, "point not on both confocal quadrics");
  return std::abs(bdot(confocal_normal(q, z1, x), confocal_normal(q, z2, x)));
}

std::vector<CVec> tangent_basis(const CVec& normal) {
  const int m = static_cast<int>(normal.size());
  int k = 0;
  normal.cwiseAbs().maxCoeff(&k);
  std::vector<CVec> out;
  for (int i = 0; i < m; ++i) {
    if (i == k) continue;
    CVec t = CVec::Zero(m);
    t(i) = 1.0;
    t(k) = -normal(i) / normal(k);
    out.push_back(t);
  }
  return out;
}

// Solve α²q11 + 2αq12 + q22 = 0 for w = α t1 + t2.
static CVec null_combination(const CVec& t1, const CVec& t2, const CMat& form) {
  const cd q11 = bdot(t1, form * t1), q12 = bdot(t1, form * t2), q22 = bdot(t2, form * t2);
  if (std::abs(q11) < 1e-14) return t1;
  const cd disc = branch_sqrt(q12 * q12 - q11 * q22);
  const cd alpha = (-q12 + disc) / q11;
  return alpha * t1 + t2;
}

CVec ruling_direction(const QuadricSpec& q, const CVec& x0, std::mt19937_64& rng) {
  const CVec n0 = q.A * x0 + q.B;
  const auto tb = tangent_basis(n0);
  // Two random tangent combinations span the search plane.
  CVec t1 = CVec::Zero(x0.size()), t2 = CVec::Zero(x0.size());
  for (const auto& t : tb) {
    t1 += random_cd(rng) * t;
    t2 += random_cd(rng) * t;
  }
  CVec w = null_combination(t1, t2, q.A);
  return w / w.norm();
}

CVec polar_direction(const QuadricSpec& q, const CVec& x0, const CVec& w, std::mt19937_64& rng) {
  const CVec n0 = q.A * x0 + q.B;
  const auto tb = tangent_basis(n0);
  const CVec aw = q.A * w;
  // Tangent combos c with Σ c_i (awᵀt_i) = 0.
  const int k = static_cast<int>(tb.size());
  CVec coef(k);
  for (int i = 0; i < k; ++i) coef(i) = bdot(aw, tb[i]);
  int piv = 0;
  coef.cwiseAbs().maxCoeff(&piv);
  CVec c = random_cvec(k, rng);
  if (std::abs(coef(piv)) > 0) {
    cd rest = 0;
    for (int i = 0; i < k; ++i)
      if (i != piv) rest += c(i) * coef(i);
    c(piv) = -rest / coef(piv);
  }
  CVec out = CVec::Zero(x0.size());
  for (int i = 0; i < k; ++i) out += c(i) * tb[i];
  return out / out.norm();
}

std::vector<cd> elliptic_coordinates(const QuadricSpec& q, const CVec& x, double tol_iso) {
  const int m = q.n + 1;
  double amax = 0;
  for (const auto& b : q.sj.blocks) amax = std::max(amax, std::abs(b.a));
  const double rho = amax > 0 ? 0.5 / amax : 0.5;
  const int K = m + 1;
  std::vector<cd> samples(K);
  auto det_r = [&](cd z) {
    cd d = 1.0;
    for (const auto& b : q.sj.blocks) d *= std::pow(1.0 - z * b.a, b.p);
    return d;
  };
  for (int k = 0; k < K; ++k) {
    const cd zk = rho * std::polar(1.0, 2.0 * std::numbers::pi * k / K);
    samples[k] = eval_confocal(q, zk, x) * det_r(zk);
  }
  std::vector<cd> c(K);
  for (int j = 0; j < K; ++j) {
    cd s = 0;
    for (int k = 0; k < K; ++k) s += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / K);
    c[j] = s / static_cast<double>(K) / std::pow(rho, j);
  }
  double cmax = 0;
  for (cd v : c) cmax = std::max(cmax, std::abs(v));
  int deg = K - 1;
  while (deg > 0 && std::abs(c[deg]) < 1e-12 * cmax) --deg;
  std::vector<cd> roots;
  if (deg >= 1) {
    CMat comp = CMat::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
    Eigen::ComplexEigenSolver<CMat> es(comp);
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
  }
  for (auto& z : roots) {
    for (int it = 0; it < 8; ++it) {
      const cd qz = eval_confocal(q, z, x);
      const cd dq = bsq(confocal_normal(q, z, x));
      if (std::abs(dq) < tol_iso) break;
      const cd step = qz / dq;
      z -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    if (std::abs(bsq(confocal_normal(q, z, x))) < tol_iso)
      throw Error(Errc::MultipleRoot, "isotropic normal at an elliptic coordinate");
  }
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) { return std::abs(a) < std::abs(b); });
  return roots;
}

std::optional<CVec> intersect_confocal(const QuadricSpec& q, cd z1, cd z2, const CVec& x_start, int max_iter) {
  CVec x = x_start;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::Vector2cd F(eval_confocal(q, z1, x), eval_confocal(q, z2, x));
    const double scale = std::max(1.0, x.squaredNorm());
    if (F.cwiseAbs().maxCoeff() < 1e-14 * scale) return x;
    CMat J(2, x.size());
    J.row(0) = 2.0 * confocal_normal(q, z1, x).transpose();
    J.row(1) = 2.0 * confocal_normal(q, z2, x).transpose();
    const CMat JH = J.adjoint();
    const Eigen::Matrix2cd G = J * JH;
    const CVec step = -JH * G.partialPivLu().solve(F);
    x += step;
    if (!x.allFinite()) return std::nullopt;
  }
  Eigen::Vector2cd F(eval_confocal(q, z1, x), eval_confocal(q, z2, x));
  if (F.cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, x.squaredNorm())) return x;
  return std::nullopt;
}

static CMat sqrt_a_plus_fbar(const QuadricSpec& q) {
  const int m = q.n + 1;
  CMat S = CMat::Zero(m, m);
  int off = 0;
  for (size_t i = 0; i < q.sj.blocks.size(); ++i) {
    const auto& b = q.sj.blocks[i];
    if (i == 0)
      S.block(off, off, b.p, b.p) = sqrt_cyclic_block(b.p);
    else
      S.block(off, off, b.p, b.p) = sqrt_affine_block(b.a, 1.0, b.p);
    off += b.p;
  }
  return S;
}

static void finish_lmap(const QuadricSpec& q, LMap& lm) {
  const int n = q.n;
  if (q.kind == Kind::IQWC) lm.Ap = lm.L.transpose() * q.A * q.A * lm.L;
  else lm.Ap = q.A;
  lm.IB = (lm.Linv * q.B).head(n);
  lm.B2 = bsq(q.B);
}

LMap build_lmap(const QuadricSpec& q, std::uint64_t seed, bool diagonalize) {
  const int m = q.n + 1;
  const int n = q.n;
  LMap lm;
  lm.R = CMat::Identity(m, m);
  if (q.kind == Kind::QC) {
    lm.Linv = sqrt_sj(q.sj);
    lm.L = lm.Linv.inverse();
  } else if (q.kind == Kind::QWC) {
    SJSpec s = q.sj;
    s.blocks.back().a = 1.0;
    lm.Linv = sqrt_sj(s);
    lm.L = lm.Linv.inverse();
  } else {
    const CMat S = sqrt_a_plus_fbar(q);
    const CVec s = S * isotropic_vector(1, m);
    const CMat Q = orth_complete({s}, m, seed);
    CMat R(m, m);
    for (int i = 0; i < n; ++i) R.col(i) = Q.row(i + 1).transpose();
    R.col(n) = s;
    lm.R = R;
    lm.Linv = R.transpose() * S;
    lm.L = S.partialPivLu().solve(R);
    if (diagonalize) {
      const CMat Apn = (lm.L.transpose() * q.A * q.A * lm.L).topLeftCorner(n, n);
      Eigen::ComplexEigenSolver<CMat> es(Apn);
      CMat P = es.eigenvectors();
      bool ok = true;
      for (int j = 0; j < n && ok; ++j) {
        const cd nn = bsq(P.col(j));
        if (std::abs(nn) < 1e-8) ok = false;
        else P.col(j) /= branch_sqrt(nn);
      }
      if (ok && orth_defect(P) < 1e-9) {
        CMat G = CMat::Identity(m, m);
        G.topLeftCorner(n, n) = P;
        lm.R = lm.R * G;
        lm.Linv = lm.R.transpose() * S;
        lm.L = S.partialPivLu().solve(lm.R);
        lm.diagonalized = true;
      }
    }
  }
  finish_lmap(q, lm);
  return lm;
}

CVec reduced_shift(const QuadricSpec& q, const LMap& lm, cd z) { return lm.Linv * ivory_shift(q, z); }

CMat sqrt_reduced_resolvent(const QuadricSpec& q, const LMap& lm, cd z) {
  return (lm.Linv * sqrt_resolvent(q, z) * lm.L).topLeftCorner(q.n, q.n);
}

double LMapReport::max() const {
  return std::max({kernel_image, metric, bshift, ap_symmetric, ap_kernel, translation, on_paraboloid, top_coefficient});
}

LMapReport check_lmap(const QuadricSpec& q, const LMap& lm, const std::vector<cd>& zs) {
  const int m = q.n + 1, n = q.n;
  LMapReport r;
  const CVec en = unit_vector(m, m);
  CMat Iproj = CMat::Identity(m, m);
  Iproj(n, n) = 0.0;
  if (q.kind == Kind::IQWC) {
    const CVec f1 = isotropic_vector(1, m);
    const CVec fb = f1.conjugate();
    r.kernel_image = max_abs(lm.L * en - f1);
    r.metric = max_abs(lm.L.transpose() * (q.A + fb * fb.transpose()) * lm.L - CMat::Identity(m, m));
    r.ap_kernel = max_abs(lm.Ap * en) + max_abs(lm.Ap * (lm.L.transpose() * f1));
  } else {
    r.metric = max_abs(lm.L.transpose() * q.A * lm.L - (q.kind == Kind::QC ? CMat::Identity(m, m) : Iproj));
  }
  if (q.kind != Kind::QC) r.bshift = max_abs(lm.L.transpose() * q.B + en);
  r.ap_symmetric = max_abs(lm.Ap - lm.Ap.transpose());
  if (q.kind != Kind::QC) {
    for (cd z : zs) {
      const CVec lc = reduced_shift(q, lm, z);
      const CMat srp = sqrt_reduced_resolvent(q, lm, z);
      const CVec ic = lc.head(n);
      r.translation = std::max(r.translation, max_abs(ic + srp * ic + z * lm.IB));
      // The n-block of √R′ squares to I − zA′.
      const CMat sq = srp * srp - (CMat::Identity(n, n) - z * lm.Ap.topLeftCorner(n, n));
      r.translation = std::max(r.translation, max_abs(sq));
      if (q.kind == Kind::IQWC) {
        r.on_paraboloid = std::max(r.on_paraboloid, std::abs(bsq(ic) - 2.0 * lc(n)));
        const CVec fb = isotropic_vector(1, m).conjugate();
        r.top_coefficient = std::max(r.top_coefficient, std::abs(lc(n) - bdot(fb, ivory_shift(q, z))));
      }
    }
  }
  return r;
}

CVec chart_to_ambient(const QuadricSpec& q, const LMap& lm, const CVec& V) {
  const int n = q.n, m = n + 1;
  if (V.size() != n) throw Error(Errc::InvalidArgument, "chart vector has wrong length");
  const cd v2 = bsq(V);
  CVec Z(m);
  if (q.kind == Kind::QC) {
    if (std::abs(v2 + 1.0) < 1e-12) throw Error(Errc::ChartSingularity, "|V|^2 = -1");
    Z.head(n) = 2.0 * V;
    Z(n) = v2 - 1.0;
    Z /= (v2 + 1.0);
  } else {
    Z.head(n) = V;
    Z(n) = 0.5 * v2;
  }
  return lm.L * Z;
}

cd chart_h(const QuadricSpec& q, const LMap& lm, const CVec& V) {
  if (q.kind == Kind::QC) {
    const int n = q.n;
    const cd v2 = bsq(V);
    if (std::abs(v2 + 1.0) < 1e-12) throw Error(Errc::ChartSingularity, "|V|^2 = -1");
    CVec X(n + 1);
    X.head(n) = 2.0 * V;
    X(n) = v2 - 1.0;
    X /= (v2 + 1.0);
    return bdot(X, q.A * X);
  }
  const int n = q.n;
  return bdot(V, lm.Ap.topLeftCorner(n, n) * V) + 2.0 * bdot(V, lm.IB) + lm.B2;
}

ChartNormal chart_normal_h(const QuadricSpec& q, const LMap& lm, const CVec& V, double tol_iso) {
  const int n = q.n, m = n + 1;
  ChartNormal out;
  CVec Nhat;
  if (q.kind == Kind::QC) {
    const cd v2 = bsq(V);
    if (std::abs(v2 + 1.0) < 1e-12) throw Error(Errc::ChartSingularity, "|V|^2 = -1");
    CVec X(m);
    X.head(n) = 2.0 * V;
    X(n) = v2 - 1.0;
    X /= (v2 + 1.0);
    Nhat = lm.Linv * X;
  } else {
    CVec Vp = CVec::Zero(m);
    Vp.head(n) = V;
    Nhat = lm.Linv.transpose() * Vp + q.B;
  }
  out.H = chart_h(q, lm, V);
  if (std::abs(out.H) < tol_iso) throw Error(Errc::IsotropicNormal, "H vanishes");
  out.N = Nhat / branch_sqrt(out.H);
  return out;
}

CVec sample_on_quadric(const QuadricSpec& q, const LMap& lm, std::mt19937_64& rng, double scale) {
  return chart_to_ambient(q, lm, random_cvec(q.n, rng, scale));
}

}  // namespace bq
