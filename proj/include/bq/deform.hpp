#pragma once

#include <vector>

#include "bq/grid.hpp"
#include "bq/quadric.hpp"

namespace bq {

// Quadric data entering the conjugate-coordinate system.
struct SystemData {
  Kind kind = Kind::QWC;
  int n = 2;
  CMat Apn;  // n×n block of A′ ((I)QWC)
  CVec IB;   // first n entries of L^{-1}B
  cd B2;     // BᵀB
  CMat A;    // full A
  CMat L, Linv;
};

SystemData make_system(const QuadricSpec& q, const LMap& lm);

// 2V + (|V|²−1)e_{n+1}
CVec sphere_lift(const CVec& V);

// Source s with ∂_jΛ = ω_jΛ − e_je_jᵀRᵀs: A′V + IB, or 2(I_{1,n} + Ve_{n+1}ᵀ)A X̃ for QC.
CVec system_source(const SystemData& sys, const CVec& V);
// ΛᵀΛ + H (QWC) or ΛᵀΛ + X̃ᵀAX̃ (QC).
cd prime_residual(const SystemData& sys, const CVec& V, const CVec& Lam);
cd system_h(const SystemData& sys, const CVec& V);

// ω_j from P_l = RᵀR_l.
CMat omega_from_p(const std::vector<CMat>& P, int j);

struct FieldGrid {
  GridSpec grid;
  int n = 2;
  std::vector<CVec> V, Lam;
  std::vector<CMat> R;
};

// Per-node ω_j from finite differences of the R field.
std::vector<std::vector<CMat>> omega_field(const GridSpec& g, const std::vector<CMat>& R, int order);

bool peterson_admissible(const SystemData& sys, double tol, double* residual = nullptr);

// Closed-form 0-soliton: each (v_j, λ_j) solves v'' = −a′_j v − b_j along its own axis.
class ZeroSolitonExact {
 public:
  ZeroSolitonExact(const SystemData& sys, const Eigen::VectorXd& u0, const CVec& V0, const CVec& Lam0);
  void eval(const Eigen::VectorXd& u, CVec& V, CVec& Lam) const;

 private:
  int n_;
  Eigen::VectorXd u0_;
  CVec v0_, l0_, a_, b_;
};

struct ZeroSolitonResult {
  FieldGrid field;
  double prime_drift = 0;
};

ZeroSolitonResult zero_soliton(const SystemData& sys, const GridSpec& g, const CVec& V_base, const CVec& Lam_base,
                               const std::vector<int>& order, int threads = 1, double tol_pi = 1e-10,
                               double tol_deg = 1e-10);

struct DefResidual {
  double two_form = 0;  // (a)
  double distinct = 0;  // (b)
  double orth = 0;      // (c)
  double max() const { return std::max({two_form, distinct, orth}); }
};

// Per node, per ordered pair (j,k), j≠k: the two-form residual entry; stored as n×n matrices (diag 0).
std::vector<CMat> defqwc_field(const GridSpec& g, const std::vector<CMat>& R, const CMat& Apn, int order);
DefResidual residual_defqwc(const GridSpec& g, const std::vector<CMat>& R, const CMat& Apn, int order = 2,
                            int margin = 1);
DefResidual residual_defqc(const GridSpec& g, const std::vector<CMat>& R, const std::vector<CVec>& V,
                           const CMat& A, int order = 2, int margin = 1);

// Rotation of the plane by angle phi.
CMat plane_rotation(double phi);
struct SineGordonFit {
  double correlation = 0;  // |<x,y>| / (|x||y|)
  cd constant;             // least-squares x ≈ constant·y
  int samples = 0;
};
// n = 2: two-form residual entry (0,1) of R(φ) versus φ_00 − φ_11 + (a′₁ − a′₂) sin φ cos φ, both by finite differences.
SineGordonFit sine_gordon_fit(const GridSpec& g, const std::vector<double>& phi, const CMat& Apn, int order,
                              int margin);
// Leaf-system residual: ∂_jV − Re_jλ_j and ∂_jΛ − ω_jΛ + e_je_jᵀRᵀs, max over nodes in mask.
double system_residual(const SystemData& sys, const FieldGrid& f, int order, int margin);
double system_residual_at(const SystemData& sys, const FieldGrid& f, int order, const std::vector<int>& nodes);

struct FundamentalForms {
  int n = 2;
  std::vector<CMat> g;                   // metric
  std::vector<std::vector<CMat>> Gamma;  // Gamma[node][l](j,k)
  std::vector<CVec> h0;                  // quadric normal
  std::vector<CMat> h;                   // (n−1)×n, row α
  std::vector<CVec> a;                   // |h_j|
  std::vector<CMat> S0;
  std::vector<std::vector<CMat>> eta;    // eta[node][k](β,α) = N_βᵀ∂_kN_α
  double gamma_gap = 0;                  // closed-form vs finite-difference Γ, interior nodes
};

struct FormsReport {
  double gauss = 0;          // R_{mjkl} vs joined-normal forms
  double gauss_quadric = 0;  // R_{mjkl} vs h⁰
  double joined_orth = 0;    // h_jᵀh_k − δ_jk a_j²
  double syst0 = 0;          // Σ (h⁰_j/a_j)² + 1
  double codazzi = 0;        // with solved normal connection
  double codazzi_quadric = 0;
  double ricci = 0;
  double conjugate = 0;      // Γ^l_{jk}, j,k,l distinct
  double max() const;
};

// S₀ with prescribed first row; rows after the first are sign-aligned to ref when given.
CMat complete_first_row(const CVec& r, std::uint64_t seed, const CMat* ref);

// Pointwise Γ^l_{jk} (returned as Gamma[l](j,k)) and h⁰ from the system state; P_l = RᵀR_l.
struct LocalGamma {
  std::vector<CMat> Gamma;
  CVec h0;
  double normal_gap = 0;  // |solved normal coefficient − h⁰|
};
LocalGamma local_christoffel(const QuadricSpec& q, const LMap& lm, const SystemData& sys, const CVec& V,
                             const CVec& Lam, const CMat& R, const std::vector<CMat>& P);

// closed_gamma: Γ from local_christoffel with P from finite differences of R; otherwise from FD of g.
FundamentalForms forms_assemble(const QuadricSpec& q, const LMap& lm, const FieldGrid& f, std::uint64_t seed,
                                int order = 4, bool closed_gamma = true);
FormsReport forms_check(const FundamentalForms& ff, const GridSpec& g, int order, const std::vector<int>& nodes);

// Chart Jacobian columns ∂x₀/∂v^k.
CMat chart_jacobian(const QuadricSpec& q, const LMap& lm, const CVec& V);

// Path integration of a node-sampled closed 1-form (omega[axis][node]).
struct QuadratureResult {
  std::vector<CVec> x;
  double plaquette = 0;
};
QuadratureResult quadrature_1form(const GridSpec& g, const std::vector<std::vector<CVec>>& omega, const CVec& base,
                                  double tol_closure = 1e-5);

}  // namespace bq
