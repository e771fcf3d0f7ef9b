#include "bq/backlund.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace bq {

BacklundContext make_context(const QuadricSpec& q, const LMap& lm, cd z, int branch) {
  if (std::abs(z) < 1e-14) throw Error(Errc::InvalidArgument, "z must be nonzero");
  BacklundContext c;
  c.sys = make_system(q, lm);
  c.z = z;
  c.sz = branch_sqrt(z) * double(branch >= 0 ? 1 : -1);
  c.SRz = sqrt_resolvent(q, z);
  const int n = q.n;
  if (q.kind == Kind::QC) {
    c.SRp = c.SRz.topLeftCorner(n, n);
    c.D = c.SRz / c.sz;
    c.ILC = CVec::Zero(n);
  } else {
    c.SRp = sqrt_reduced_resolvent(q, lm, z);
    c.D = c.SRp / c.sz;
    c.ILC = reduced_shift(q, lm, z).head(n);
  }
  return c;
}

BacklundContext mirrored(const BacklundContext& ctx) {
  BacklundContext c = ctx;
  c.sz = -ctx.sz;
  c.D = -ctx.D;
  return c;
}

double context_residual(const BacklundContext& ctx) {
  const int k = static_cast<int>(ctx.D.rows());
  const CMat& Afull = ctx.sys.kind == Kind::QC ? ctx.sys.A : ctx.sys.Apn;
  const CMat target = (CMat::Identity(k, k) - ctx.z * Afull) / ctx.z;
  return max_abs(ctx.D * ctx.D - target);
}

CMat riccati_dir_qwc(const BacklundContext& ctx, const CMat& R0, const CMat& w0j, const CMat& R1, int j) {
  // R₁E_jR₀ᵀDR₁ = R₁.col(j) (R₀.col(j)ᵀDR₁); DR₀E_j = (DR₀).col(j) e_jᵀ
  CMat out = -R1 * w0j;
  out -= R1.col(j) * (R0.col(j).transpose() * ctx.D * R1);
  out.col(j) += ctx.D * R0.col(j);
  return out;
}

QCAux make_qc_aux(const BacklundContext& ctx, const CVec& V0) {
  const int n = ctx.sys.n, m = n + 1;
  QCAux a;
  CMat K = CMat::Zero(m, n);  // I_{1,n} + e_{n+1}V₀ᵀ as m×n
  K.topRows(n).setIdentity();
  K.row(n) = V0.transpose();
  const CVec X = sphere_lift(V0);
  a.M = (ctx.D * K).topRows(n);
  a.N = (ctx.D * X).head(n);
  const CVec se = ctx.SRz.col(n);
  a.W = se.head(n) + V0 * se(n) - V0;
  a.U = bdot(ctx.SRz.row(n).transpose(), X) - bsq(V0) - 1.0;
  return a;
}

CMat riccati_dir_qc(const BacklundContext&, const QCAux& aux, const CVec& Lam0, const CMat& R0, const CMat& w0j,
                    const CMat& R1, int j, double tol_u) {
  if (std::abs(aux.U) < tol_u) throw Error(Errc::UNearZero, "|U| below threshold");
  const int n = static_cast<int>(R1.rows());
  CMat Ej = CMat::Zero(n, n);
  Ej(j, j) = 1.0;
  CMat m = R1 * w0j + 2.0 * aux.M * R0 * Ej - 2.0 * R1 * Ej * R0.transpose() * aux.M.transpose() * R1;
  m += (2.0 / aux.U) * R1 * Ej * R0.transpose() * aux.W * (Lam0.transpose() + aux.N.transpose() * R1);
  m -= (2.0 / aux.U) * (R1 * Lam0 + aux.N) * aux.W.transpose() * R0 * Ej;
  return -m;
}

CMat riccati_dir_qc_expanded(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                             const CMat& w0j, const CMat& R1, int j) {
  const int n = ctx.sys.n, m = n + 1;
  const CMat Imn = CMat::Identity(m, n);
  const CMat I1n = Imn.transpose();
  const CVec e = CVec::Unit(m, n);
  const CVec X = 2.0 * Imn * V0 + (bsq(V0) - 1.0) * e;
  const CMat Sq = ctx.SRz / ctx.sz;
  CMat Ej = CMat::Zero(n, n);
  Ej(j, j) = 1.0;
  const cd U = (e.transpose() * ctx.SRz * X)(0) - bsq(V0) - 1.0;
  const CMat left = I1n + V0 * e.transpose();   // n×m
  const CMat right = Imn + e * V0.transpose();  // m×n
  CMat t = R1 * w0j;
  t += 2.0 * I1n * Sq * right * R0 * Ej;
  t -= 2.0 * R1 * Ej * R0.transpose() * left * Sq * Imn * R1;
  t += 2.0 * R1 * Ej * R0.transpose() * (left * ctx.SRz * e - V0) *
       (Lam0.transpose() + X.transpose() * Sq * Imn * R1) / U;
  t -= 2.0 * (R1 * Lam0 + I1n * Sq * X) * (e.transpose() * ctx.SRz * right - V0.transpose()) * R0 * Ej / U;
  return -t;
}

Transformed algebraic_transform_qwc(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                                    const CMat& R1) {
  Transformed t;
  const CVec RL = R1 * Lam0;
  t.V = ctx.SRp * V0 + ctx.ILC - ctx.sz * RL;
  t.Lam = R0.transpose() * (ctx.sz * (ctx.sys.Apn * V0 + ctx.sys.IB) + ctx.SRp * RL);
  return t;
}

Transformed algebraic_transform_qc(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                                   const CMat& R1, double tol_u) {
  const int n = ctx.sys.n, m = n + 1;
  const CVec X0 = sphere_lift(V0);
  const CVec SX = ctx.SRz * X0;
  const cd U = SX(n) - bsq(V0) - 1.0;
  if (std::abs(U) < tol_u) throw Error(Errc::UNearZero, "transform denominator vanishes");
  const CVec RL = R1 * Lam0;
  Transformed t;
  t.V = -(ctx.sz * RL + SX.head(n)) / U;
  CVec K = CVec::Zero(m);  // (I_{1,n} + e V₁ᵀ)R₁Λ₀
  K.head(n) = RL;
  K(n) = bdot(t.V, RL);
  const CVec inner = ctx.sz * (ctx.sys.A * X0) - ctx.SRz * K;
  const CVec g = inner.head(n) + V0 * inner(n);
  t.Lam = 2.0 * R0.transpose() * (g + V0 * bdot(t.V, RL)) / U;
  return t;
}

Transformed algebraic_transform(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                                const CMat& R1) {
  return ctx.sys.kind == Kind::QC ? algebraic_transform_qc(ctx, V0, Lam0, R0, R1)
                                  : algebraic_transform_qwc(ctx, V0, Lam0, R0, R1);
}

CVec tangency_vector(const BacklundContext& ctx, const CVec& V0, const CVec& V1) {
  return ctx.SRp * V1 - V0 + ctx.ILC;
}

TransformCheck check_transform(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                               const CMat& R1, const Transformed& t) {
  TransformCheck c;
  const SystemData& s = ctx.sys;
  c.prime = std::abs(prime_residual(s, t.V, t.Lam));
  if (s.kind != Kind::QC) {
    const CVec T1 = tangency_vector(ctx, V0, t.V);
    const CVec T0 = ctx.SRp * V0 - t.V + ctx.ILC;
    c.tc = std::abs(bsq(T1) + ctx.z * system_h(s, t.V));
    c.rla1 = (ctx.sz * R1 * Lam0 - T0).cwiseAbs().maxCoeff();
    c.rla2 = (-ctx.sz * R0 * t.Lam - T1).cwiseAbs().maxCoeff();
  } else {
    const int n = s.n;
    auto side = [&](const CVec& Va, const CVec& Vb) {
      const CVec w = ctx.SRz * sphere_lift(Vb);
      return CVec(w.head(n) + Va * w(n) - Va * (bsq(Vb) + 1.0));
    };
    c.rla1 = (ctx.sz * R0 * t.Lam - side(V0, t.V)).cwiseAbs().maxCoeff();
    c.rla2 = (-ctx.sz * R1 * Lam0 - side(t.V, V0)).cwiseAbs().maxCoeff();
  }
  return c;
}

SeedFrame identity_seed(int n) {
  return [n](const Eigen::VectorXd&, CMat& R0, std::vector<CMat>& w0) {
    R0 = CMat::Identity(n, n);
    w0.assign(n, CMat::Zero(n, n));
  };
}

namespace {

CVec vec(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }
CMat unvec(const CVec& v, int n) { return Eigen::Map<const CMat>(v.data(), n, n); }

}  // namespace

RiccatiRun integrate_backlund_qwc(const BacklundContext& ctx, const GridSpec& g, const SeedFrame& seed,
                                  const CMat& R1_base, int threads, bool alternate, double drift_max) {
  const int n = g.n;
  AxisDeriv f = [&](const Eigen::VectorXd& u, const CVec& y, int j) {
    CMat R0;
    std::vector<CMat> w0;
    seed(u, R0, w0);
    return vec(riccati_dir_qwc(ctx, R0, w0[j], unvec(y, n), j));
  };
  RiccatiRun run;
  const auto ys = sweep_rk4(g, vec(R1_base), f, default_order(n), threads);
  run.R1.resize(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    run.R1[i] = unvec(ys[i], n);
    run.drift = std::max(run.drift, max_abs(run.R1[i] * run.R1[i].transpose() - CMat::Identity(n, n)));
  }
  if (run.drift > drift_max) throw Error(Errc::DriftExceeded, "orthogonality drift " + std::to_string(run.drift));
  if (alternate) {
    const auto alt = sweep_rk4(g, vec(R1_base), f, reversed_order(n), threads);
    for (std::size_t i = 0; i < ys.size(); ++i)
      run.mismatch = std::max(run.mismatch, (alt[i] - ys[i]).cwiseAbs().maxCoeff());
  }
  return run;
}

double riccati_residual_qwc(const BacklundContext& ctx, const GridSpec& g, const std::vector<CMat>& R0,
                            const std::vector<CMat>& R1, int order, const std::vector<int>& nodes) {
  const auto w0 = omega_field(g, R0, order);
  double r = 0;
  for (int j = 0; j < g.n; ++j) {
    const auto d = fd_derivative(g, R1, j, order);
    for (int i : nodes) r = std::max(r, max_abs(d[i] - riccati_dir_qwc(ctx, R0[i], w0[i][j], R1[i], j)));
  }
  return r;
}

FieldGrid transform_field(const BacklundContext& ctx, const FieldGrid& seed, const std::vector<CMat>& R1) {
  FieldGrid out;
  out.grid = seed.grid;
  out.n = seed.n;
  out.R = R1;
  out.V.resize(R1.size());
  out.Lam.resize(R1.size());
  for (std::size_t i = 0; i < R1.size(); ++i) {
    const auto t = algebraic_transform(ctx, seed.V[i], seed.Lam[i], seed.R[i], R1[i]);
    out.V[i] = t.V;
    out.Lam[i] = t.Lam;
  }
  return out;
}

CMat QCLineSeed::R0(double u) const { return R0base * CMat(u * K).exp(); }

CMat QCLineSeed::omega(double u) const {
  const int n = static_cast<int>(K.rows());
  CMat w = CMat::Zero(n, n);
  for (int a = 1; a < n; ++a) {
    w(a, 0) = alpha(a) + beta(a) * u;
    w(0, a) = -w(a, 0);
  }
  return w;
}

QCLineResult integrate_qc_line(const BacklundContext& ctx, const QCLineSeed& seed, const CVec& V0_base,
                               const CVec& L0_base, const CMat& R1_base, double h, int count, double tol_u) {
  const SystemData& s = ctx.sys;
  const int n = s.n;
  auto rhs = [&](double u, const CVec& y) {
    const CVec V0 = y.head(n), L0 = y.segment(n, n);
    const CMat R1 = unvec(y.tail(n * n), n);
    const CMat R0 = seed.R0(u);
    const CMat w = seed.omega(u);
    CVec d(y.size());
    d.head(n) = R0.col(0) * L0(0);
    CVec dl = w * L0;
    dl(0) -= bdot(R0.col(0), system_source(s, V0));
    d.segment(n, n) = dl;
    d.tail(n * n) = vec(riccati_dir_qc(ctx, make_qc_aux(ctx, V0), L0, R0, w, R1, 0, tol_u));
    return d;
  };
  auto step = [&](double u, const CVec& y, double hh) {
    const CVec k1 = rhs(u, y);
    const CVec k2 = rhs(u + hh / 2, y + hh / 2 * k1);
    const CVec k3 = rhs(u + hh / 2, y + hh / 2 * k2);
    const CVec k4 = rhs(u + hh, y + hh * k3);
    return CVec(y + hh / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };
  QCLineResult out;
  CVec y(2 * n + n * n);
  y << V0_base, L0_base, vec(R1_base);
  std::vector<CVec> ys{y};
  for (int k = 1; k < count; ++k) {
    const double u = (k - 1) * h;
    bool ok = false;
    for (int level = 0; level <= 8 && !ok; ++level) {
      const int sub = 1 << level;
      try {
        CVec yy = ys.back();
        for (int t = 0; t < sub; ++t) yy = step(u + t * h / sub, yy, h / sub);
        ys.push_back(yy);
        ok = true;
        out.halvings = std::max(out.halvings, level);
      } catch (const Error& e) {
        if (e.code() != Errc::UNearZero) throw;
      }
    }
    if (!ok) break;
  }
  out.reached = static_cast<int>(ys.size());
  for (int k = 0; k < out.reached; ++k) {
    const double u = k * h;
    out.u.push_back(u);
    const CVec V0 = ys[k].head(n), L0 = ys[k].segment(n, n);
    const CMat R1 = unvec(ys[k].tail(n * n), n);
    const CMat R0 = seed.R0(u);
    const auto t = algebraic_transform_qc(ctx, V0, L0, R0, R1, tol_u);
    out.V0.push_back(V0);
    out.L0.push_back(L0);
    out.R0.push_back(R0);
    out.R1.push_back(R1);
    out.V1.push_back(t.V);
    out.L1.push_back(t.Lam);
    out.orth_drift = std::max(out.orth_drift, orth_defect(R1));
    out.prime0 = std::max(out.prime0, std::abs(prime_residual(s, V0, L0)));
    out.prime1 = std::max(out.prime1, std::abs(prime_residual(s, t.V, t.Lam)));
  }
  for (int k = 1; k + 1 < out.reached; ++k) {
    const CVec d = (out.V1[k + 1] - out.V1[k - 1]) / (2 * h) - out.R1[k].col(0) * out.L1[k](0);
    out.leaf_line = std::max(out.leaf_line, d.cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace bq
