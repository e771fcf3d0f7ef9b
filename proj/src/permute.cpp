#include "bq/permute.hpp"

#include <functional>

namespace bq {

namespace {

double cond(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) == 0 ? INFINITY : s(0) / s(s.size() - 1);
}

CMat guarded_inverse(const CMat& m, double cond_max, Errc code, const char* what) {
  if (!(cond(m) < cond_max)) throw Error(code, what);
  return m.partialPivLu().inverse();
}

}  // namespace

CMat bpt_compose(const CMat& R0, const CMat& R1, const CMat& R2, const CMat& D1, const CMat& D2, double cond_max) {
  const CMat P = R2 * R1.transpose();
  const CMat den = D2 * P - D1;
  return (D2 - D1 * P) * guarded_inverse(den, cond_max, Errc::SingularSuperposition, "superposition denominator") *
         R0;
}

double bpt_scalar_residual(const CMat& R0, const CMat& R1, const CMat& R2, const CMat& R3, const CMat& D1,
                           const CMat& D2, cd z1, cd z2) {
  const int n = static_cast<int>(R0.rows());
  const CMat lhs = (D2 * R3 * R0.transpose() + D1) * (D2 * R2 * R1.transpose() - D1);
  return max_abs(lhs - (1.0 / z2 - 1.0 / z1) * CMat::Identity(n, n));
}

double bpt_orth_identity(const CMat& R1, const CMat& R2, const CMat& D1, const CMat& D2) {
  const CMat P = R2 * R1.transpose();
  return max_abs((D2 - P * D1) * (D2 * P - D1) - (P * D2 - D1) * (D2 - D1 * P));
}

BptGridReport bpt_verify(const BacklundContext& c1, const BacklundContext& c2, const GridSpec& g,
                         const std::vector<CMat>& R0, const std::vector<CMat>& R1, const std::vector<CMat>& R2,
                         const std::vector<CMat>& R3, int order, const std::vector<int>& nodes) {
  BptGridReport rep;
  const CMat& D1 = c1.D;
  const CMat& D2 = c2.D;
  std::vector<CMat> Q(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) Q[i] = R3[i] * R0[i].transpose();
  for (int i : nodes) {
    rep.orth = std::max(rep.orth, orth_defect(Q[i]));
    rep.scalar = std::max(rep.scalar, bpt_scalar_residual(R0[i], R1[i], R2[i], R3[i], D1, D2, c1.z, c2.z));
  }
  const int n = g.n;
  for (int j = 0; j < n; ++j) {
    const auto dQ = fd_derivative(g, Q, j, order);
    for (int i : nodes) {
      // −Q R₀E_jR₁ᵀ(D₂Q + D₁) + (D₂ + QD₁)R₁E_jR₀ᵀ
      const CMat a = R0[i].col(j) * R1[i].col(j).transpose();
      const CMat b = R1[i].col(j) * R0[i].col(j).transpose();
      const CMat rhs = -Q[i] * a * (D2 * Q[i] + D1) + (D2 + Q[i] * D1) * b;
      rep.derivative = std::max(rep.derivative, max_abs(dQ[i] - rhs));
    }
  }
  rep.riccati_1 = riccati_residual_qwc(c2, g, R1, R3, order, nodes);
  rep.riccati_2 = riccati_residual_qwc(c1, g, R2, R3, order, nodes);
  return rep;
}

M3Result m3_r7(const CMat& R0, const CMat& R1, const CMat& R2, const CMat& R4, const CMat& D1, const CMat& D2,
               const CMat& D3, cd z1, cd z2, cd z3, double cond_max) {
  const double tz = 1e-12;
  if (std::abs(z1 - z2) < tz || std::abs(z1 - z3) < tz || std::abs(z2 - z3) < tz)
    throw Error(Errc::DistinctZRequired, "cube parameters must be pairwise distinct");
  const CMat box = (D2 * D2 - D3 * D3) * D1 * R1 + (D3 * D3 - D1 * D1) * D2 * R2 + (D1 * D1 - D2 * D2) * D3 * R4;
  if (!(cond(box) < cond_max)) throw Error(Errc::SingularBox, "box matrix is singular");
  const CMat R3 = bpt_compose(R0, R1, R2, D1, D2, cond_max);
  const CMat R5 = bpt_compose(R0, R1, R4, D1, D3, cond_max);
  const CMat R6 = bpt_compose(R0, R2, R4, D2, D3, cond_max);
  const CMat* Rs[3] = {&R1, &R2, &R4};
  const CMat* Ds[3] = {&D1, &D2, &D3};
  // pair[i][j]: superposition of the i and j leaves
  const CMat* pair[3][3] = {{nullptr, &R3, &R5}, {&R3, nullptr, &R6}, {&R5, &R6, nullptr}};
  const CMat R0t = R0.transpose();
  const CMat Dall_inv = (D1 * D2 * D3).inverse();
  auto route = [&](int i, int j, int k) {
    const CMat& Di = *Ds[i];
    const CMat& Dj = *Ds[j];
    const CMat& Dk = *Ds[k];
    const CMat Xij = *pair[i][j] * R0t, Xik = *pair[i][k] * R0t;
    const CMat Yi = *Rs[i] * R0t;
    const CMat inner = guarded_inverse(Dj * Xij - Dk * Xik, cond_max, Errc::SingularBox, "route denominator");
    return CMat(Dall_inv * Di * ((Dj * Dj - Dk * Dk) * Dj * Xij * inner * Yi - Dj * Dj * Yi) * R0);
  };
  M3Result out;
  out.candidates = {route(0, 1, 2), route(1, 0, 2), route(1, 2, 0), route(2, 0, 1)};
  out.candidates.push_back(bpt_compose(R1, R3, R5, D2, D3, cond_max));
  out.candidates.push_back(bpt_compose(R2, R3, R6, D1, D3, cond_max));
  out.R7 = out.candidates[0];
  for (std::size_t a = 0; a < out.candidates.size(); ++a)
    for (std::size_t b = a + 1; b < out.candidates.size(); ++b)
      out.discrepancy = std::max(out.discrepancy, max_abs(out.candidates[a] - out.candidates[b]));
  return out;
}

Lattice lattice_build(const std::vector<CMat>& R0, const std::vector<std::vector<CMat>>& single,
                      const std::vector<LatticeParam>& params, const std::vector<unsigned>& targets,
                      const std::vector<int>& ordering) {
  Lattice lat;
  const std::size_t N = R0.size();
  lat.sites[0] = R0;
  for (std::size_t p = 0; p < single.size(); ++p) lat.sites[1u << p] = single[p];
  std::function<const std::vector<CMat>*(unsigned)> get = [&](unsigned T) -> const std::vector<CMat>* {
    auto it = lat.sites.find(T);
    if (it != lat.sites.end()) return it->second.empty() ? nullptr : &it->second;
    std::vector<int> members;
    for (int p : ordering)
      if (T & (1u << p)) members.push_back(p);
    const int p = members[members.size() - 2], q = members.back();
    const unsigned S = T & ~(1u << p) & ~(1u << q);
    const auto* base = get(S);
    const auto* rp = get(S | (1u << p));
    const auto* rq = get(S | (1u << q));
    std::vector<CMat> field;
    if (base && rp && rq) {
      field.resize(N);
      try {
        for (std::size_t i = 0; i < N; ++i)
          field[i] = bpt_compose((*base)[i], (*rp)[i], (*rq)[i], params[p].D, params[q].D);
      } catch (const Error& e) {
        if (e.code() != Errc::SingularSuperposition) throw;
        field.clear();
      }
    }
    if (field.empty()) lat.holes.push_back(T);
    auto& slot = lat.sites[T];
    slot = std::move(field);
    return slot.empty() ? nullptr : &slot;
  };
  for (unsigned T : targets) get(T);
  return lat;
}

LatticeCheck lattice_check(const Lattice& lat, const std::vector<LatticeParam>& params) {
  LatticeCheck out;
  const int k = static_cast<int>(params.size());
  auto have = [&](unsigned T) {
    auto it = lat.sites.find(T);
    return it != lat.sites.end() && !it->second.empty();
  };
  for (const auto& [T, field] : lat.sites) {
    if (field.empty()) continue;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) {
        const unsigned bp = 1u << p, bq = 1u << q;
        if ((T & bp) || (T & bq) || !have(T | bp) || !have(T | bq) || !have(T | bp | bq)) continue;
        const auto& R1 = lat.sites.at(T | bp);
        const auto& R2 = lat.sites.at(T | bq);
        const auto& R3 = lat.sites.at(T | bp | bq);
        for (std::size_t i = 0; i < field.size(); ++i) {
          const double s = bpt_scalar_residual(field[i], R1[i], R2[i], R3[i], params[p].D, params[q].D,
                                               params[p].z, params[q].z);
          out.squares = std::max({out.squares, s, orth_defect(R3[i] * field[i].transpose())});
        }
        ++out.n_squares;
        for (int r = q + 1; r < k; ++r) {
          const unsigned br = 1u << r;
          if ((T & br) || !have(T | br) || !have(T | bp | bq | br)) continue;
          const auto& R4 = lat.sites.at(T | br);
          const auto& R7 = lat.sites.at(T | bp | bq | br);
          for (std::size_t i = 0; i < field.size(); ++i) {
            const auto m = m3_r7(field[i], R1[i], R2[i], R4[i], params[p].D, params[q].D, params[r].D, params[p].z,
                                 params[q].z, params[r].z);
            out.cubes = std::max({out.cubes, m.discrepancy, max_abs(m.R7 - R7[i])});
          }
          ++out.n_cubes;
        }
      }
  }
  return out;
}

}  // namespace bq
