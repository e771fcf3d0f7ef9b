#include "bq/embed.hpp"

namespace bq {

namespace {

CVec pad(const CVec& v, int size) {
  CVec out = CVec::Zero(size);
  out.head(v.size()) = v;
  return out;
}

CMat pad_rows(const CMat& m, int rows) {
  CMat out = CMat::Zero(rows, m.cols());
  out.topRows(m.rows()) = m;
  return out;
}

std::vector<CMat> as_mats(const std::vector<CVec>& v) { return {v.begin(), v.end()}; }

}  // namespace

AmbientFrame degenerate_seed_frame(const QuadricSpec& q, const LMap& lm, const FieldGrid& seed) {
  const int n = q.n, m = n + 1, big = 2 * n - 1;
  AmbientFrame fr;
  for (int i = 0; i < seed.grid.nodes(); ++i) {
    const CVec& V = seed.V[i];
    fr.x.push_back(pad(chart_to_ambient(q, lm, V), big));
    fr.T.push_back(pad_rows(chart_jacobian(q, lm, V) * seed.R[i] * seed.Lam[i].asDiagonal(), big));
    CMat N = CMat::Zero(big, n - 1);
    N.col(0) = pad(chart_normal_h(q, lm, V).N, big);
    for (int a = 1; a < n - 1; ++a) N(m + a - 1, a) = 1.0;
    fr.N.push_back(N);
  }
  return fr;
}

AmbientFrame seed_embedding_n2(const QuadricSpec& q, const LMap& lm, const ZeroSolitonExact& ex, const GridSpec& g,
                               int threads) {
  if (q.n != 2 || q.kind == Kind::QC) throw Error(Errc::InvalidArgument, "frame integration implemented for n = 2 (I)QWC");
  const SystemData sys = make_system(q, lm);
  const std::vector<CMat> P(2, CMat::Zero(2, 2));
  const CMat I2 = CMat::Identity(2, 2);
  // Connection matrix of [x_1 x_2 N] along axis j.
  auto omega = [&](const Eigen::VectorXd& u, int j) {
    CVec V, Lam;
    ex.eval(u, V, Lam);
    const auto lg = local_christoffel(q, lm, sys, V, Lam, I2, P);
    const CMat Xj = chart_jacobian(q, lm, V) * Lam.asDiagonal();
    const CMat gi = (Xj.transpose() * Xj).inverse();
    const cd sH = branch_sqrt(system_h(sys, V));
    CVec r(2);
    r << -I_UNIT * Lam(0) / sH, -I_UNIT * Lam(1) / sH;
    const CVec h = CVec((CVec(2) << -r(1), r(0)).finished()).cwiseProduct(Lam);
    CMat W = CMat::Zero(3, 3);
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k) W(l, k) = lg.Gamma[l](j, k);
    W(2, j) = h(j);
    for (int l = 0; l < 2; ++l) W(l, 2) = -h(j) * gi(j, l);
    return W;
  };
  AxisDeriv f = [&](const Eigen::VectorXd& u, const CVec& y, int j) {
    const CMat F = Eigen::Map<const CMat>(y.data() + 3, 3, 3);
    CVec d(12);
    d.head(3) = F.col(j);
    const CMat dF = F * omega(u, j);
    d.tail(9) = Eigen::Map<const CVec>(dF.data(), 9);
    return d;
  };
  CVec V, Lam;
  ex.eval(g.point(0), V, Lam);
  CVec y0(12);
  const CMat T0 = chart_jacobian(q, lm, V) * Lam.asDiagonal();
  y0 << chart_to_ambient(q, lm, V), T0.col(0), T0.col(1), chart_normal_h(q, lm, V).N;
  const auto ys = sweep_rk4(g, y0, f, default_order(2), threads);
  const auto alt = sweep_rk4(g, y0, f, reversed_order(2), threads);
  AmbientFrame fr;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    fr.x.push_back(ys[i].head(3));
    CMat T(3, 2);
    T << ys[i].segment(3, 3), ys[i].segment(6, 3);
    fr.T.push_back(T);
    fr.N.push_back(ys[i].segment(9, 3));
    fr.mismatch = std::max(fr.mismatch, (ys[i] - alt[i]).cwiseAbs().maxCoeff());
  }
  return fr;
}

LeafEmbedding leaf_embed(const QuadricSpec& q, const LMap& lm, const BacklundContext& ctx, const AmbientFrame& seed,
                         const FieldGrid& f0, const FieldGrid& f1) {
  LeafEmbedding e;
  for (int i = 0; i < f0.grid.nodes(); ++i) {
    const CVec T1 = tangency_vector(ctx, f0.V[i], f1.V[i]);
    // [x⁰_v] = [x⁰_u] diag(1/Λ₀) R₀ᵀ
    const CVec coef = f0.R[i].transpose() * T1;
    e.x1.push_back(seed.x[i] + seed.T[i] * coef.cwiseQuotient(f0.Lam[i]));
    const CVec x01 = chart_to_ambient(q, lm, f1.V[i]);
    e.x01.push_back(x01);
    e.xz1.push_back(sqrt_resolvent(q, ctx.z) * x01 + ivory_shift(q, ctx.z));
  }
  return e;
}

namespace {

std::vector<std::vector<CMat>> tangents(const GridSpec& g, const std::vector<CVec>& x, int order) {
  std::vector<std::vector<CMat>> d(g.n);
  for (int j = 0; j < g.n; ++j) d[j] = fd_derivative(g, as_mats(x), j, order);
  return d;
}

}  // namespace

double acpia_residual(const GridSpec& g, const LeafEmbedding& e, int order, const std::vector<int>& nodes) {
  const auto d1 = tangents(g, e.x1, order);
  const auto d0 = tangents(g, e.x01, order);
  double r = 0;
  for (int i : nodes)
    for (int j = 0; j < g.n; ++j)
      for (int k = j; k < g.n; ++k) {
        const cd a = (d1[j][i].transpose() * d1[k][i])(0, 0);
        const cd b = (d0[j][i].transpose() * d0[k][i])(0, 0);
        r = std::max(r, std::abs(a - b));
      }
  return r;
}

double joined_forms_residual(const QuadricSpec& q, const LMap& lm, const GridSpec& g, const AmbientFrame& seed,
                             const FieldGrid& f0, const LeafEmbedding& e, int order, const std::vector<int>& nodes) {
  const int n = g.n;
  std::vector<CMat> N0(g.nodes()), x00(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    N0[i] = chart_normal_h(q, lm, f0.V[i]).N;
    x00[i] = chart_to_ambient(q, lm, f0.V[i]);
  }
  const auto d01 = tangents(g, e.x01, order);
  const auto dz1 = tangents(g, e.xz1, order);
  std::vector<std::vector<CMat>> dN0(n), dN(n);
  for (int j = 0; j < n; ++j) {
    dN0[j] = fd_derivative(g, N0, j, order);
    dN[j] = fd_derivative(g, seed.N, j, order);
  }
  double r = 0;
  for (int i : nodes) {
    std::vector<CVec> c(n);
    for (int j = 0; j < n; ++j) {
      const int k = static_cast<int>(seed.N[i].cols());
      c[j].resize(1 + k);
      c[j](0) = -I_UNIT * (dN0[j][i].transpose() * (e.xz1[i] - x00[i]))(0, 0);
      c[j].tail(k) = -dN[j][i].transpose() * (e.x1[i] - seed.x[i]);
    }
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const cd lhs = (d01[j][i].transpose() * d01[k][i] - dz1[j][i].transpose() * dz1[k][i])(0, 0);
        r = std::max(r, std::abs(lhs - bdot(c[j], c[k])));
      }
  }
  return r;
}

RulingCheck ruling_facet_check(const QuadricSpec& q, const LMap& lm, const BacklundContext& ctx, const CVec& V0,
                               const CVec& Lam0, const CMat& R0, const CMat& R1, std::uint64_t seed) {
  const int n = q.n, m = n + 1, big = 2 * n - 1;
  RulingCheck out;
  const auto t = algebraic_transform_qwc(ctx, V0, Lam0, R0, R1);
  const CVec& V1 = t.V;
  const CMat J0 = chart_jacobian(q, lm, V0);
  const CVec x00 = chart_to_ambient(q, lm, V0);
  const CVec xz1 = x00 + J0 * tangency_vector(ctx, V0, V1);
  out.on_confocal = std::abs(eval_confocal(q, ctx.z, xz1));
  out.ivory_match = (xz1 - (ctx.SRz * chart_to_ambient(q, lm, V1) + ivory_shift(q, ctx.z))).cwiseAbs().maxCoeff();

  const ChartNormal cn0 = chart_normal_h(q, lm, V0);
  const CVec T0 = ctx.SRp * V0 - V1 + ctx.ILC;
  CVec row = I_UNIT * T0 / branch_sqrt(ctx.z * cn0.H);
  row /= branch_sqrt(bsq(row));  // absorbs orthogonality drift of an integrated R₁
  const CMat M = orth_complete({row}, n, seed);
  const CVec iso_p = M.row(0).transpose() + I_UNIT * M.row(1).transpose();
  const CVec iso_m = M.row(0).transpose() - I_UNIT * M.row(1).transpose();
  out.isotropy = std::max(std::abs(bsq(iso_p)), std::abs(bsq(iso_m)));

  // Rolled facet: dV₁ ↦ F dV₁ in C^{2n−1}.
  const CMat Xz = ctx.SRz * chart_jacobian(q, lm, V1);
  CMat frame = CMat::Zero(big, n);
  frame.col(1) = pad(cn0.N, big);
  for (int a = 2; a < n; ++a) frame(m + a - 2, a) = 1.0;
  const CMat F = pad_rows(Xz, big) + pad(cn0.N, big) * T0.transpose() / branch_sqrt(cn0.H) + ctx.sz * frame * M;

  const CVec Nz = pad(confocal_normal(q, ctx.z, xz1), big);
  CMat C(n - 1, n);
  C.row(0) = Nz.transpose() * F;
  for (int a = 2; a < n; ++a) C.row(a - 1) = F.row(m + a - 2);
  Eigen::JacobiSVD<CMat> svd(C, Eigen::ComputeFullV);
  const CVec y = svd.matrixV().col(n - 1);
  const CMat Rzi = resolvent_inv(q, ctx.z);
  auto ratio = [&](const CVec& dir) {
    const CVec w = (F * dir).head(m);
    return std::abs(bdot(w, q.A * Rzi * w)) / w.squaredNorm();
  };
  out.ruling = ratio(y);
  auto align = [&](const CVec& c) {
    const cd s = c.dot(y) / c.squaredNorm();  // projection coefficient
    return (y - s * c).norm();
  };
  out.alignment = std::min(align(iso_p), align(iso_m));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  out.control = ratio(random_cvec(n, rng));
  return out;
}

double asymptotic_correspondence(const FundamentalForms& ff, const std::vector<int>& nodes) {
  double r = 0;
  const int n = ff.n;
  for (int i : nodes) {
    Eigen::JacobiSVD<CMat> svd(ff.h[i], Eigen::ComputeFullV);
    const CVec b = svd.matrixV().col(n - 1);
    for (int j = 1; j < n; ++j) r = std::max(r, std::abs(b(j) / b(0) - 1.0));
  }
  return r;
}

}  // namespace bq
