#include "bq/deform.hpp"

#include <cmath>

#include "bq/parallel.hpp"

namespace bq {

namespace {

std::vector<CMat> as_mats(const std::vector<CVec>& v) { return {v.begin(), v.end()}; }

}  // namespace

SystemData make_system(const QuadricSpec& q, const LMap& lm) {
  SystemData s;
  s.kind = q.kind;
  s.n = q.n;
  s.A = q.A;
  s.L = lm.L;
  s.Linv = lm.Linv;
  s.B2 = lm.B2;
  if (q.kind == Kind::QC) {
    s.Apn = CMat::Zero(q.n, q.n);
    s.IB = CVec::Zero(q.n);
  } else {
    s.Apn = lm.Ap.topLeftCorner(q.n, q.n);
    s.IB = lm.IB;
  }
  return s;
}

CVec sphere_lift(const CVec& V) {
  const int n = static_cast<int>(V.size());
  CVec X(n + 1);
  X.head(n) = 2.0 * V;
  X(n) = bsq(V) - 1.0;
  return X;
}

CVec system_source(const SystemData& sys, const CVec& V) {
  if (sys.kind != Kind::QC) return sys.Apn * V + sys.IB;
  const int n = sys.n;
  const CVec w = sys.A * sphere_lift(V);
  return 2.0 * (w.head(n) + V * w(n));
}

cd system_h(const SystemData& sys, const CVec& V) {
  if (sys.kind != Kind::QC) return bdot(V, sys.Apn * V) + 2.0 * bdot(V, sys.IB) + sys.B2;
  const CVec X = sphere_lift(V);
  return bdot(X, sys.A * X);
}

cd prime_residual(const SystemData& sys, const CVec& V, const CVec& Lam) { return bsq(Lam) + system_h(sys, V); }

CMat omega_from_p(const std::vector<CMat>& P, int j) {
  const int n = static_cast<int>(P.size());
  CMat w = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    if (a == j) continue;
    w(a, j) = P[a](a, j);
    w(j, a) = P[a](j, a);
  }
  return w;
}

std::vector<std::vector<CMat>> omega_field(const GridSpec& g, const std::vector<CMat>& R, int order) {
  const int n = g.n;
  std::vector<std::vector<CMat>> P(n);
  for (int l = 0; l < n; ++l) {
    P[l] = fd_derivative(g, R, l, order);
    for (int i = 0; i < g.nodes(); ++i) P[l][i] = R[i].transpose() * P[l][i];
  }
  std::vector<std::vector<CMat>> out(g.nodes(), std::vector<CMat>(n));
  for (int i = 0; i < g.nodes(); ++i) {
    std::vector<CMat> Pi(n);
    for (int l = 0; l < n; ++l) Pi[l] = P[l][i];
    for (int j = 0; j < n; ++j) out[i][j] = omega_from_p(Pi, j);
  }
  return out;
}

bool peterson_admissible(const SystemData& sys, double tol, double* residual) {
  double r = 0;
  for (int j = 0; j < sys.n; ++j)
    for (int k = 0; k < sys.n; ++k)
      if (j != k) r = std::max(r, std::abs(sys.Apn(j, k)));
  if (residual) *residual = r;
  return sys.kind != Kind::QC && r < tol;
}

ZeroSolitonExact::ZeroSolitonExact(const SystemData& sys, const Eigen::VectorXd& u0, const CVec& V0,
                                   const CVec& Lam0)
    : n_(sys.n), u0_(u0), v0_(V0), l0_(Lam0), a_(sys.Apn.diagonal()), b_(sys.IB) {}

void ZeroSolitonExact::eval(const Eigen::VectorXd& u, CVec& V, CVec& Lam) const {
  V.resize(n_);
  Lam.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const double t = u(j) - u0_(j);
    const cd a = a_(j);
    // C = cos(√a t), S = sin(√a t)/√a, K = (1 − C)/a
    cd C, S, K;
    if (std::abs(a) * t * t > 1e-3) {
      const cd w = branch_sqrt(a);
      C = std::cos(w * t);
      S = std::sin(w * t) / w;
      K = (1.0 - C) / a;
    } else {
      const cd x = -a * t * t;
      cd tc = 1.0, ts = t, tk = 0.5 * t * t;
      C = 0;
      S = 0;
      K = 0;
      for (int k = 0; k < 12; ++k) {
        C += tc;
        S += ts;
        K += tk;
        tc *= x / double((2 * k + 1) * (2 * k + 2));
        ts *= x / double((2 * k + 2) * (2 * k + 3));
        tk *= x / double((2 * k + 3) * (2 * k + 4));
      }
    }
    V(j) = v0_(j) * C + l0_(j) * S - b_(j) * K;
    Lam(j) = -a * v0_(j) * S + l0_(j) * C - b_(j) * S;
  }
}

ZeroSolitonResult zero_soliton(const SystemData& sys, const GridSpec& g, const CVec& V_base, const CVec& Lam_base,
                               const std::vector<int>& order, int threads, double tol_pi, double tol_deg) {
  if (sys.kind == Kind::QC) throw Error(Errc::InvalidArgument, "0-soliton needs a (I)QWC quadric");
  const int n = sys.n;
  const double r0 = std::abs(prime_residual(sys, V_base, Lam_base));
  if (r0 > tol_pi) throw Error(Errc::PrimeIntegralViolation, "base residual " + std::to_string(r0));
  AxisDeriv f = [&](const Eigen::VectorXd&, const CVec& y, int j) {
    CVec d = CVec::Zero(2 * n);
    const CVec V = y.head(n);
    d(j) = y(n + j);
    d(n + j) = -system_source(sys, V)(j);
    return d;
  };
  CVec y0(2 * n);
  y0 << V_base, Lam_base;
  const auto ys = sweep_rk4(g, y0, f, order, threads);
  ZeroSolitonResult out;
  out.field.grid = g;
  out.field.n = n;
  out.field.V.resize(g.nodes());
  out.field.Lam.resize(g.nodes());
  out.field.R.assign(g.nodes(), CMat::Identity(n, n));
  for (int i = 0; i < g.nodes(); ++i) {
    out.field.V[i] = ys[i].head(n);
    out.field.Lam[i] = ys[i].tail(n);
    if (out.field.Lam[i].cwiseAbs().minCoeff() < tol_deg)
      throw Error(Errc::StepFailure, "lambda collapsed at node " + std::to_string(i));
    out.prime_drift = std::max(out.prime_drift, std::abs(prime_residual(sys, out.field.V[i], out.field.Lam[i])));
  }
  return out;
}

namespace {

// Shared two-form residual with source S(node) (n×n, already conjugated by R).
template <class Src>
std::vector<CMat> two_form_field(const GridSpec& g, const std::vector<CMat>& R, int order, Src source) {
  const int n = g.n;
  std::vector<std::vector<CMat>> P(n), Q(n);
  for (int l = 0; l < n; ++l) {
    P[l] = fd_derivative(g, R, l, order);
    for (int i = 0; i < g.nodes(); ++i) P[l][i] = R[i].transpose() * P[l][i];
  }
  for (int l = 0; l < n; ++l) Q[l] = fd_derivative(g, P[l], l, order);
  std::vector<CMat> out(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    CMat base = source(i);
    for (int l = 0; l < n; ++l) base -= P[l][i].col(l) * P[l][i].row(l);
    CMat r = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (j != k) r(j, k) = Q[j][i](j, k) - Q[k][i](j, k) + base(j, k);
    out[i] = r;
  }
  return out;
}

DefResidual summarize(const GridSpec& g, const std::vector<CMat>& R, const std::vector<CMat>& field, int order,
                      int margin) {
  DefResidual res;
  const int n = g.n;
  std::vector<std::vector<CMat>> P(n);
  if (n >= 3)
    for (int l = 0; l < n; ++l) P[l] = fd_derivative(g, R, l, order);
  for (int i = 0; i < g.nodes(); ++i) {
    res.orth = std::max(res.orth, orth_defect(R[i]));
    if (!g.interior(i, margin)) continue;
    res.two_form = std::max(res.two_form, max_abs(field[i]));
    if (n >= 3) {
      for (int l = 0; l < n; ++l) {
        const CMat p = R[i].transpose() * P[l][i];
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            if (j != k && j != l && k != l) res.distinct = std::max(res.distinct, std::abs(p(j, k)));
      }
    }
  }
  return res;
}

}  // namespace

std::vector<CMat> defqwc_field(const GridSpec& g, const std::vector<CMat>& R, const CMat& Apn, int order) {
  return two_form_field(g, R, order, [&](int i) -> CMat { return R[i].transpose() * Apn * R[i]; });
}

DefResidual residual_defqwc(const GridSpec& g, const std::vector<CMat>& R, const CMat& Apn, int order, int margin) {
  return summarize(g, R, defqwc_field(g, R, Apn, order), order, margin);
}

DefResidual residual_defqc(const GridSpec& g, const std::vector<CMat>& R, const std::vector<CVec>& V, const CMat& A,
                           int order, int margin) {
  const int n = g.n;
  auto field = two_form_field(g, R, order, [&](int i) -> CMat {
    CMat G = CMat::Zero(n, n + 1);
    G.leftCols(n).setIdentity();
    G.col(n) = V[i];
    return 4.0 * R[i].transpose() * G * A * G.transpose() * R[i];
  });
  return summarize(g, R, field, order, margin);
}

CMat plane_rotation(double phi) {
  CMat R(2, 2);
  R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return R;
}

SineGordonFit sine_gordon_fit(const GridSpec& g, const std::vector<double>& phi, const CMat& Apn, int order,
                              int margin) {
  if (g.n != 2) throw Error(Errc::InvalidArgument, "sine-Gordon reduction needs n = 2");
  std::vector<CMat> R(g.nodes()), P(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    R[i] = plane_rotation(phi[i]);
    P[i] = CMat::Constant(1, 1, phi[i]);
  }
  const auto two = defqwc_field(g, R, Apn, order);
  const auto d00 = fd_derivative(g, fd_derivative(g, P, 0, order), 0, order);
  const auto d11 = fd_derivative(g, fd_derivative(g, P, 1, order), 1, order);
  const cd k = Apn(0, 0) - Apn(1, 1);
  CVec x(g.nodes()), y(g.nodes());
  int c = 0;
  for (int i = 0; i < g.nodes(); ++i) {
    if (!g.interior(i, margin)) continue;
    x(c) = two[i](0, 1);
    y(c) = d00[i](0, 0) - d11[i](0, 0) + k * std::sin(phi[i]) * std::cos(phi[i]);
    ++c;
  }
  x.conservativeResize(c);
  y.conservativeResize(c);
  SineGordonFit f;
  f.samples = c;
  const cd xy = y.dot(x);
  f.correlation = std::abs(xy) / (x.norm() * y.norm());
  f.constant = xy / y.squaredNorm();
  return f;
}

double system_residual_at(const SystemData& sys, const FieldGrid& f, int order, const std::vector<int>& nodes) {
  const GridSpec& g = f.grid;
  const int n = f.n;
  const auto om = omega_field(g, f.R, order);
  const auto Vm = as_mats(f.V), Lm = as_mats(f.Lam);
  double r = 0;
  for (int j = 0; j < n; ++j) {
    const auto dV = fd_derivative(g, Vm, j, order);
    const auto dL = fd_derivative(g, Lm, j, order);
    for (int i : nodes) {
      const CVec ev = dV[i].col(0) - f.R[i].col(j) * f.Lam[i](j);
      CVec el = dL[i].col(0) - om[i][j] * f.Lam[i];
      el(j) += bdot(f.R[i].col(j), system_source(sys, f.V[i]));
      r = std::max({r, ev.cwiseAbs().maxCoeff(), el.cwiseAbs().maxCoeff()});
    }
  }
  return r;
}

double system_residual(const SystemData& sys, const FieldGrid& f, int order, int margin) {
  std::vector<int> nodes;
  for (int i = 0; i < f.grid.nodes(); ++i)
    if (f.grid.interior(i, margin)) nodes.push_back(i);
  return system_residual_at(sys, f, order, nodes);
}

QuadratureResult quadrature_1form(const GridSpec& g, const std::vector<std::vector<CVec>>& omega, const CVec& base,
                                  double tol_closure) {
  QuadratureResult out;
  out.x.assign(g.nodes(), CVec());
  out.x[0] = base;
  std::vector<int> frontier{0};
  for (int axis = 0; axis < g.n; ++axis) {
    const int N = g.count[axis];
    const double h = g.h[axis];
    std::vector<int> next;
    for (int start : frontier) {
      std::vector<int> line(N);
      line[0] = start;
      for (int k = 1; k < N; ++k) line[k] = g.neighbor(line[k - 1], axis, 1);
      auto f = [&](int k) -> const CVec& { return omega[axis][line[k]]; };
      for (int k = 0; k + 1 < N; ++k) {
        CVec inc;
        if (N < 4) inc = 0.5 * h * (f(k) + f(k + 1));
        else if (k == 0) inc = h / 24 * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
        else if (k == N - 2) inc = h / 24 * (f(N - 4) - 5.0 * f(N - 3) + 19.0 * f(N - 2) + 9.0 * f(N - 1));
        else inc = h / 24 * (-f(k - 1) + 13.0 * f(k) + 13.0 * f(k + 1) - f(k + 2));
        out.x[line[k + 1]] = out.x[line[k]] + inc;
      }
      next.insert(next.end(), line.begin(), line.end());
    }
    frontier.swap(next);
  }
  for (int i = 0; i < g.nodes(); ++i)
    for (int a = 0; a < g.n; ++a)
      for (int b = a + 1; b < g.n; ++b) {
        const int pa = g.neighbor(i, a, 1), pb = g.neighbor(i, b, 1);
        if (pa < 0 || pb < 0) continue;
        const int pab = g.neighbor(pa, b, 1);
        const CVec loop = 0.5 * g.h[a] * (omega[a][i] + omega[a][pa]) + 0.5 * g.h[b] * (omega[b][pa] + omega[b][pab]) -
                          0.5 * g.h[a] * (omega[a][pb] + omega[a][pab]) - 0.5 * g.h[b] * (omega[b][i] + omega[b][pb]);
        out.plaquette = std::max(out.plaquette, loop.cwiseAbs().maxCoeff());
      }
  if (out.plaquette > tol_closure)
    throw Error(Errc::ClosureViolation, "plaquette mismatch " + std::to_string(out.plaquette));
  return out;
}

}  // namespace bq
