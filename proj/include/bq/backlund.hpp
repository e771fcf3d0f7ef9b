#pragma once

#include <functional>
#include <vector>

#include "bq/deform.hpp"

namespace bq {

struct BacklundContext {
  SystemData sys;
  cd z, sz;
  CMat D;    // √R′_z/√z (n×n) for (I)QWC, √R_z/√z (m×m) for QC
  CMat SRp;  // √R′_z restricted to the first n coordinates
  CMat SRz;  // full √R_z
  CVec ILC;  // first n entries of L^{-1}C(z)
};

// branch = −1 takes the other square root of z.
BacklundContext make_context(const QuadricSpec& q, const LMap& lm, cd z, int branch = 1);
// Same z with √z → −√z.
BacklundContext mirrored(const BacklundContext& ctx);
// |D² − R′_z/z| (or the full R_z for QC).
double context_residual(const BacklundContext& ctx);

// ∂_jR₁ from −dR₁ = R₁ω₀ + R₁δR₀ᵀDR₁ − DR₀δ.
CMat riccati_dir_qwc(const BacklundContext& ctx, const CMat& R0, const CMat& w0j, const CMat& R1, int j);

struct QCAux {
  CMat M;
  CVec N, W;
  cd U;
};
QCAux make_qc_aux(const BacklundContext& ctx, const CVec& V0);
// Compact form; throws UNearZero when |U| < tol_u.
CMat riccati_dir_qc(const BacklundContext& ctx, const QCAux& aux, const CVec& Lam0, const CMat& R0, const CMat& w0j,
                    const CMat& R1, int j, double tol_u = 1e-8);
// Term-by-term evaluation of the expanded display, used as an oracle.
CMat riccati_dir_qc_expanded(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                             const CMat& w0j, const CMat& R1, int j);

struct Transformed {
  CVec V, Lam;
};
Transformed algebraic_transform_qwc(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                                    const CMat& R1);
Transformed algebraic_transform_qc(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                                   const CMat& R1, double tol_u = 1e-8);
Transformed algebraic_transform(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                                const CMat& R1);

struct TransformCheck {
  double prime = 0;  // leaf prime integral
  double tc = 0;     // |T|² + zH₁ ((I)QWC only)
  double rla1 = 0, rla2 = 0;
  double max() const { return std::max({prime, tc, rla1, rla2}); }
};
TransformCheck check_transform(const BacklundContext& ctx, const CVec& V0, const CVec& Lam0, const CMat& R0,
                               const CMat& R1, const Transformed& t);

// √R′V₁ − V₀ + I L^{-1}C(z): chart displacement from the seed point to the rolled leaf point.
CVec tangency_vector(const BacklundContext& ctx, const CVec& V0, const CVec& V1);

// Seed R₀ and ω₀ at an arbitrary parameter point.
using SeedFrame = std::function<void(const Eigen::VectorXd& u, CMat& R0, std::vector<CMat>& w0)>;
SeedFrame identity_seed(int n);

struct RiccatiRun {
  std::vector<CMat> R1;
  double drift = 0;     // max |R₁R₁ᵀ − I|
  double mismatch = 0;  // max difference to the reversed sweep
};
RiccatiRun integrate_backlund_qwc(const BacklundContext& ctx, const GridSpec& g, const SeedFrame& seed,
                                  const CMat& R1_base, int threads = 1, bool alternate = true,
                                  double drift_max = 1e-4);

// Finite-difference residual of the Riccati system for a given leaf field over a seed field.
double riccati_residual_qwc(const BacklundContext& ctx, const GridSpec& g, const std::vector<CMat>& R0,
                            const std::vector<CMat>& R1, int order, const std::vector<int>& nodes);

// Pointwise leaf of a seed field.
FieldGrid transform_field(const BacklundContext& ctx, const FieldGrid& seed, const std::vector<CMat>& R1);

// QC integration along the first coordinate line; transverse data of the seed is prescribed.
struct QCLineSeed {
  CMat R0base, K;      // R₀(u) = R0base·exp(uK), K antisymmetric
  CVec alpha, beta;    // (ω₀)_{a1} = α_a + β_a u, a ≥ 2
  CMat R0(double u) const;
  CMat omega(double u) const;
};
struct QCLineResult {
  std::vector<double> u;
  std::vector<CVec> V0, L0, V1, L1;
  std::vector<CMat> R0, R1;
  double orth_drift = 0;
  double prime0 = 0, prime1 = 0;
  double leaf_line = 0;  // central-difference residual of V₁' − R₁e₁λ¹₁
  int reached = 0;       // nodes integrated before an unresolved |U| ≈ 0
  int halvings = 0;
};
QCLineResult integrate_qc_line(const BacklundContext& ctx, const QCLineSeed& seed, const CVec& V0_base,
                               const CVec& L0_base, const CMat& R1_base, double h, int count,
                               double tol_u = 1e-8);

}  // namespace bq
