#include "bq/deform.hpp"

namespace bq {

double FormsReport::max() const {
  return std::max({gauss, gauss_quadric, joined_orth, syst0, codazzi, codazzi_quadric, ricci, conjugate});
}

CMat chart_jacobian(const QuadricSpec& q, const LMap& lm, const CVec& V) {
  const int n = q.n, m = n + 1;
  CMat J(m, n);
  if (q.kind == Kind::QC) {
    const cd s = bsq(V) + 1.0;
    if (std::abs(s) < 1e-12) throw Error(Errc::ChartSingularity, "|V|^2 = -1");
    CVec X = sphere_lift(V) / s;
    J.topRows(n) = 2.0 * CMat::Identity(n, n);
    J.row(n) = 2.0 * V.transpose();
    J -= 2.0 * X * V.transpose();
    J /= s;
  } else {
    J.topRows(n).setIdentity();
    J.row(n) = V.transpose();
  }
  return lm.L * J;
}

namespace {

// Second derivative of the chart map in directions a, b.
CVec chart_second(const QuadricSpec& q, const LMap& lm, const CVec& V, const CVec& a, const CVec& b) {
  const int n = q.n, m = n + 1;
  CVec Z = CVec::Zero(m);
  if (q.kind == Kind::QC) {
    const cd s = bsq(V) + 1.0;
    const CVec Y = sphere_lift(V);
    CVec Ya(m), Yb(m), Yab = CVec::Zero(m);
    Ya << 2.0 * a, 2.0 * bdot(V, a);
    Yb << 2.0 * b, 2.0 * bdot(V, b);
    Yab(n) = 2.0 * bdot(a, b);
    const cd sa = 2.0 * bdot(V, a), sb = 2.0 * bdot(V, b), sab = 2.0 * bdot(a, b);
    Z = Yab / s - (Ya * sb + Yb * sa) / (s * s) - Y * sab / (s * s) + 2.0 * Y * sa * sb / (s * s * s);
  } else {
    Z(n) = bdot(a, b);
  }
  return lm.L * Z;
}

}  // namespace

LocalGamma local_christoffel(const QuadricSpec& q, const LMap& lm, const SystemData& sys, const CVec& V,
                             const CVec& Lam, const CMat& R, const std::vector<CMat>& P) {
  const int n = q.n, m = n + 1;
  const CMat J = chart_jacobian(q, lm, V);
  const CMat T = J * R * Lam.asDiagonal();
  const ChartNormal cn = chart_normal_h(q, lm, V);
  CMat M(m, m);
  M.leftCols(n) = T;
  M.col(n) = cn.N;
  const auto lu = M.partialPivLu();
  const CVec Rs = R.transpose() * system_source(sys, V);
  LocalGamma out;
  out.Gamma.assign(n, CMat::Zero(n, n));
  out.h0 = CVec::Zero(n);
  for (int k = 0; k < n; ++k) {
    const CMat wk = omega_from_p(P, k);
    const CVec dlam = wk * Lam;
    for (int j = 0; j < n; ++j) {
      // ∂_k(V_j) in the R frame
      CVec c = P[k].col(j) * Lam(j);
      c(j) += dlam(j);
      if (j == k) c(j) -= Rs(k);
      const CVec xjk = J * (R * c) + chart_second(q, lm, V, R.col(j) * Lam(j), R.col(k) * Lam(k));
      const CVec coef = lu.solve(xjk);
      for (int l = 0; l < n; ++l) out.Gamma[l](j, k) = coef(l);
      if (j == k) out.h0(j) = coef(n);
      else out.normal_gap = std::max(out.normal_gap, std::abs(coef(n)));
    }
  }
  return out;
}

CMat complete_first_row(const CVec& r, std::uint64_t seed, const CMat* ref) {
  const int n = static_cast<int>(r.size());
  CMat S(n, n);
  if (n == 2) {
    S << r(0), r(1), -r(1), r(0);
    return S;
  }
  S = orth_complete({r}, n, seed);
  if (ref)
    for (int a = 1; a < n; ++a)
      if (std::real(S.row(a).dot(ref->row(a))) < 0) S.row(a) *= -1.0;
  return S;
}

FundamentalForms forms_assemble(const QuadricSpec& q, const LMap& lm, const FieldGrid& f, std::uint64_t seed,
                                int order, bool closed_gamma) {
  const SystemData sys = make_system(q, lm);
  const int n = f.n, N = f.grid.nodes();
  FundamentalForms ff;
  ff.n = n;
  ff.g.resize(N);
  ff.h0.resize(N);
  ff.a.resize(N);
  ff.S0.resize(N);
  ff.h.resize(N);
  auto node = [&](int i) {
    const CVec& V = f.V[i];
    const CVec& lam = f.Lam[i];
    if (lam.cwiseAbs().minCoeff() < 1e-10) throw Error(Errc::DegenerateLambda, "node " + std::to_string(i));
    const CMat Xj = chart_jacobian(q, lm, V) * f.R[i] * lam.asDiagonal();
    ff.g[i] = Xj.transpose() * Xj;
    const cd H = system_h(sys, V);
    if (std::abs(H) < 1e-12) throw Error(Errc::IsotropicNormal, "H vanishes at node " + std::to_string(i));
    const cd sH = branch_sqrt(H);
    CVec a(n), h0(n);
    if (q.kind == Kind::QC) {
      const cd s = bsq(V) + 1.0;
      a = 4.0 * lam / s;
      for (int j = 0; j < n; ++j) h0(j) = -4.0 * lam(j) * lam(j) / (sH * s * s);
    } else {
      a = lam;
      for (int j = 0; j < n; ++j) h0(j) = -lam(j) * lam(j) / sH;
    }
    CVec r = I_UNIT * h0.cwiseQuotient(a);
    r /= branch_sqrt(bsq(r));
    ff.a[i] = a;
    ff.h0[i] = h0;
    ff.S0[i] = complete_first_row(r, seed, i == 0 ? nullptr : &ff.S0[0]);
    ff.h[i] = ff.S0[i].bottomRows(n - 1) * a.asDiagonal();
  };
  node(0);
  for (int i = 1; i < N; ++i) node(i);

  std::vector<std::vector<CMat>> dg(n);
  for (int l = 0; l < n; ++l) dg[l] = fd_derivative(f.grid, ff.g, l, order);
  ff.Gamma.assign(N, std::vector<CMat>(n, CMat::Zero(n, n)));
  std::vector<std::vector<CMat>> closed;
  if (closed_gamma) {
    std::vector<std::vector<CMat>> dR(n);
    for (int l = 0; l < n; ++l) dR[l] = fd_derivative(f.grid, f.R, l, order);
    closed.resize(N);
    for (int i = 0; i < N; ++i) {
      std::vector<CMat> P(n);
      for (int l = 0; l < n; ++l) P[l] = f.R[i].transpose() * dR[l][i];
      closed[i] = local_christoffel(q, lm, sys, f.V[i], f.Lam[i], f.R[i], P).Gamma;
    }
  }
  for (int i = 0; i < N; ++i) {
    const CMat gi = ff.g[i].inverse();
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          cd s = 0;
          for (int p = 0; p < n; ++p) s += gi(l, p) * (dg[j][i](p, k) + dg[k][i](p, j) - dg[p][i](j, k));
          ff.Gamma[i][l](j, k) = 0.5 * s;
        }
    if (closed_gamma) {
      if (f.grid.interior(i, order / 2))
        for (int l = 0; l < n; ++l) ff.gamma_gap = std::max(ff.gamma_gap, max_abs(closed[i][l] - ff.Gamma[i][l]));
      ff.Gamma[i] = closed[i];
    }
  }

  // Normal connection from the Codazzi equations by least squares.
  const int nn = n - 1;
  std::vector<std::pair<int, int>> pairs;
  for (int b = 0; b < nn; ++b)
    for (int a = b + 1; a < nn; ++a) pairs.emplace_back(b, a);
  std::vector<std::vector<CMat>> dh(n);
  for (int k = 0; k < n; ++k) dh[k] = fd_derivative(f.grid, ff.h, k, order);
  ff.eta.assign(N, std::vector<CMat>(n, CMat::Zero(nn, nn)));
  if (!pairs.empty()) {
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < n; ++k) {
        const CMat& h = ff.h[i];
        const auto& G = ff.Gamma[i];
        CMat M = CMat::Zero((n - 1) * nn, pairs.size());
        CVec rhs((n - 1) * nn);
        int row = 0;
        for (int j = 0; j < n; ++j) {
          if (j == k) continue;
          for (int gm = 0; gm < nn; ++gm, ++row) {
            rhs(row) = dh[k][i](gm, j) - G[j](j, k) * h(gm, j) + G[k](j, j) * h(gm, k);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
              const auto [b, a] = pairs[p];
              if (gm == a) M(row, p) += h(b, j);
              if (gm == b) M(row, p) -= h(a, j);
            }
          }
        }
        const CVec c = M.colPivHouseholderQr().solve(rhs);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          const auto [b, a] = pairs[p];
          ff.eta[i][k](b, a) = c(p);
          ff.eta[i][k](a, b) = -c(p);
        }
      }
  }
  return ff;
}

FormsReport forms_check(const FundamentalForms& ff, const GridSpec& g, int order, const std::vector<int>& nodes) {
  const int n = ff.n, nn = n - 1;
  FormsReport rep;
  // dGam[p][a][node] = ∂_a Γ^p
  std::vector<std::vector<std::vector<CMat>>> dGam(n, std::vector<std::vector<CMat>>(n));
  for (int p = 0; p < n; ++p) {
    std::vector<CMat> Gp(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) Gp[i] = ff.Gamma[i][p];
    for (int a = 0; a < n; ++a) dGam[p][a] = fd_derivative(g, Gp, a, order);
  }
  std::vector<std::vector<CMat>> dh(n);
  std::vector<CMat> h0m(ff.h0.begin(), ff.h0.end());
  std::vector<std::vector<CMat>> dh0(n);
  for (int k = 0; k < n; ++k) {
    dh[k] = fd_derivative(g, ff.h, k, order);
    dh0[k] = fd_derivative(g, h0m, k, order);
  }
  // deta[k*n + j] = ∂_j η_k
  std::vector<std::vector<CMat>> detas(n * n);
  for (int k = 0; k < n; ++k) {
    std::vector<CMat> ek(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) ek[i] = ff.eta[i][k];
    for (int j = 0; j < n; ++j) detas[k * n + j] = fd_derivative(g, ek, j, order);
  }
  for (int i : nodes) {
    const auto& G = ff.Gamma[i];
    const CMat& gm = ff.g[i];
    const CMat gi = gm.inverse();
    const CMat& h = ff.h[i];
    const CVec& h0 = ff.h0[i];
    // Riemann tensor <R(∂_k,∂_l)∂_j, ∂_m>
    for (int m = 0; m < n; ++m)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            cd r = 0;
            for (int p = 0; p < n; ++p) {
              cd t = dGam[p][k][i](l, j) - dGam[p][l][i](k, j);
              for (int qq = 0; qq < n; ++qq) t += G[qq](l, j) * G[p](k, qq) - G[qq](k, j) * G[p](l, qq);
              r += gm(m, p) * t;
            }
            auto two = [&](auto hv) {
              cd s = 0;
              if (l == j && k == m) s += hv(l) * hv(k);
              if (k == j && l == m) s -= hv(k) * hv(l);
              return s;
            };
            cd joined = 0;
            for (int a = 0; a < nn; ++a) joined += two([&](int c) { return h(a, c); });
            const cd quad = two([&](int c) { return h0(c); });
            rep.gauss = std::max(rep.gauss, std::abs(r - joined));
            rep.gauss_quadric = std::max(rep.gauss_quadric, std::abs(r - quad));
          }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        cd dot = -h0(j) * h0(k);
        for (int a = 0; a < nn; ++a) dot += h(a, j) * h(a, k);
        if (j == k) dot -= ff.a[i](j) * ff.a[i](j);
        rep.joined_orth = std::max(rep.joined_orth, std::abs(dot));
      }
    cd s0 = 1.0;
    for (int j = 0; j < n; ++j) s0 += h0(j) * h0(j) / (ff.a[i](j) * ff.a[i](j));
    rep.syst0 = std::max(rep.syst0, std::abs(s0));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (j != k && k != l && j != l) rep.conjugate = std::max(rep.conjugate, std::abs(G[l](j, k)));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        const cd cq = dh0[k][i](j, 0) - G[j](j, k) * h0(j) + G[k](j, j) * h0(k);
        rep.codazzi_quadric = std::max(rep.codazzi_quadric, std::abs(cq));
        for (int gmm = 0; gmm < nn; ++gmm) {
          cd c = dh[k][i](gmm, j) - G[j](j, k) * h(gmm, j) + G[k](j, j) * h(gmm, k);
          for (int a = 0; a < nn; ++a) c -= ff.eta[i][k](a, gmm) * h(a, j);
          rep.codazzi = std::max(rep.codazzi, std::abs(c));
        }
      }
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const CMat& ej = ff.eta[i][j];
        const CMat& ek = ff.eta[i][k];
        const CMat lhs = detas[k * n + j][i] - detas[j * n + k][i] + ej * ek - ek * ej;
        for (int gmm = 0; gmm < nn; ++gmm)
          for (int a = 0; a < nn; ++a) {
            const cd rhs = gi(j, k) * (h(a, k) * h(gmm, j) - h(a, j) * h(gmm, k));
            rep.ricci = std::max(rep.ricci, std::abs(lhs(gmm, a) - rhs));
          }
      }
  }
  return rep;
}

}  // namespace bq
