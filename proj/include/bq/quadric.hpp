#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bq/sjcore.hpp"

namespace bq {

enum class Kind { QC, QWC, IQWC };

const char* kind_name(Kind k);
Kind parse_kind(const std::string& s);

// xᵀAx + 2Bᵀx + C = 0 with A in SJ form.
struct QuadricSpec {
  Kind kind = Kind::QC;
  SJSpec sj;
  CMat A;
  CVec B;
  cd C;
  int n = 0;        // ambient dimension minus one
  int b_block = 0;  // size of the SJ block carrying B (0 for QC)
};

QuadricSpec make_quadric(Kind kind, const SJSpec& sj);

// Convenience constructors.
QuadricSpec make_qc_diag(const std::vector<cd>& a);
QuadricSpec make_qwc_diag(const std::vector<cd>& a);  // appends the (0,1) block
QuadricSpec make_iqwc(int p, const std::vector<cd>& a_rest);

CMat resolvent(const QuadricSpec& q, cd z);
CMat resolvent_inv(const QuadricSpec& q, cd z);
CMat sqrt_resolvent(const QuadricSpec& q, cd z);

cd eval_confocal(const QuadricSpec& q, cd z, const CVec& x);
// R_z^{-1}(Ax + B); ∂_z Q_z = its bilinear square.
CVec confocal_normal(const QuadricSpec& q, cd z, const CVec& x);
// C(z) = −½ ∫₀^z (√R_w)^{-1} dw B as a terminating series.
CVec ivory_shift(const QuadricSpec& q, cd z);
CVec ivory_map(const QuadricSpec& q, cd z, const CVec& x0, double tol_on = 1e-8);

double ivory_theorem_residual(const QuadricSpec& q, cd z, const CVec& xa, const CVec& xb);
double tc_symmetry_residual(const QuadricSpec& q, cd z, const CVec& xa, const CVec& xb);
double ruling_length_residual(const QuadricSpec& q, cd z, const CVec& x0, const CVec& w0);
// (x_z(b) − x0(a))ᵀw + (x_z(a) − x0(b))ᵀ√R_z w for w tangent at a.
double segment_ruling_residual(const QuadricSpec& q, cd z, const CVec& xa, const CVec& xb, const CVec& wa);
// Polar pair at one point: wᵀAŵ = 0.
double polar_ruling_residual(const QuadricSpec& q, cd z, const CVec& x0, const CVec& w, const CVec& what);
double confocal_orthogonality_residual(const QuadricSpec& q, cd z1, cd z2, const CVec& x);

// Basis of {t : N̂ᵀt = 0}.
std::vector<CVec> tangent_basis(const CVec& normal);
// Tangent w with wᵀAw = 0 at x0 (x0 on Q_0).
CVec ruling_direction(const QuadricSpec& q, const CVec& x0, std::mt19937_64& rng);
// Tangent ŵ with wᵀAŵ = 0.
CVec polar_direction(const QuadricSpec& q, const CVec& x0, const CVec& w, std::mt19937_64& rng);

std::vector<cd> elliptic_coordinates(const QuadricSpec& q, const CVec& x, double tol_iso = 1e-10);

// Point on Q_{z1} ∩ Q_{z2} by minimal-norm Newton from x_start.
std::optional<CVec> intersect_confocal(const QuadricSpec& q, cd z1, cd z2, const CVec& x_start, int max_iter = 50);

// Affine chart data. For (I)QWC: x0 = L(V + ½|V|²e_{n+1}); for QC: L = (√A)^{-1}.
struct LMap {
  CMat L, Linv;
  CMat Ap;    // LᵀA²L for IQWC, A otherwise
  CMat R;     // rotation used for IQWC (identity otherwise)
  CVec IB;    // first n entries of L^{-1}B
  cd B2;      // BᵀB
  bool diagonalized = false;
};

LMap build_lmap(const QuadricSpec& q, std::uint64_t seed, bool diagonalize = false);

// L^{-1}C(z).
CVec reduced_shift(const QuadricSpec& q, const LMap& lm, cd z);
// n×n block of L^{-1}√R_z L, i.e. √(I − zA′) on the first n coordinates.
CMat sqrt_reduced_resolvent(const QuadricSpec& q, const LMap& lm, cd z);

struct LMapReport {
  double kernel_image = 0;    // |L e_{n+1} − f₁| (IQWC) or 0
  double metric = 0;          // |Lᵀ(A + f̄f̄ᵀ)L − I| (IQWC), |LᵀAL − I_{1,n}| otherwise
  double bshift = 0;          // |LᵀB + e_{n+1}|
  double ap_symmetric = 0;
  double ap_kernel = 0;       // |A′e_{n+1}| + |A′Lᵀf₁| (IQWC)
  double translation = 0;     // |(I + √R′)I L^{-1}C + z I L^{-1}B| over sample z
  double on_paraboloid = 0;   // |I L^{-1}C|² − 2 e_{n+1}ᵀL^{-1}C (IQWC)
  double top_coefficient = 0; // e_{n+1}ᵀL^{-1}C − f̄₁ᵀC(z) (IQWC)
  double max() const;
};
LMapReport check_lmap(const QuadricSpec& q, const LMap& lm, const std::vector<cd>& zs);

CVec chart_to_ambient(const QuadricSpec& q, const LMap& lm, const CVec& V);

struct ChartNormal {
  CVec N;  // unit normal
  cd H;
};
ChartNormal chart_normal_h(const QuadricSpec& q, const LMap& lm, const CVec& V, double tol_iso = 1e-12);

// H as a function of V alone (no normalization).
cd chart_h(const QuadricSpec& q, const LMap& lm, const CVec& V);

// Random on-quadric point through the chart.
CVec sample_on_quadric(const QuadricSpec& q, const LMap& lm, std::mt19937_64& rng, double scale = 0.7);

}  // namespace bq
