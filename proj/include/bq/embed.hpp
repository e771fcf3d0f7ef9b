#pragma once

#include <vector>

#include "bq/backlund.hpp"

namespace bq {

struct AmbientFrame {
  std::vector<CVec> x;
  std::vector<CMat> T;  // tangent columns x_j
  std::vector<CMat> N;  // unit normal columns
  double mismatch = 0;  // alternate-sweep difference (integrated frames)
};

// x⁰ = x₀ placed in C^{2n−1}, normal frame [N₀, e_{n+2}, ..., e_{2n−1}].
AmbientFrame degenerate_seed_frame(const QuadricSpec& q, const LMap& lm, const FieldGrid& seed);

// Nontrivial deformation of x₀ for n = 2 over a 0-soliton, by integrating the moving frame.
AmbientFrame seed_embedding_n2(const QuadricSpec& q, const LMap& lm, const ZeroSolitonExact& ex, const GridSpec& g,
                               int threads = 1);

struct LeafEmbedding {
  std::vector<CVec> x1;   // leaf deformation
  std::vector<CVec> x01;  // leaf point on x₀
  std::vector<CVec> xz1;  // its confocal image
};
LeafEmbedding leaf_embed(const QuadricSpec& q, const LMap& lm, const BacklundContext& ctx, const AmbientFrame& seed,
                         const FieldGrid& f0, const FieldGrid& f1);

// max |x¹_jᵀx¹_k − x₀¹_jᵀx₀¹_k| with finite differences.
double acpia_residual(const GridSpec& g, const LeafEmbedding& e, int order, const std::vector<int>& nodes);

// max |(g₀¹ − g_z¹)_{jk} − c_jᵀc_k|, c_j = [−i∂_jN₀⁰ᵀ(x_z¹ − x₀⁰); −∂_jN⁰ᵀ(x¹ − x⁰)].
double joined_forms_residual(const QuadricSpec& q, const LMap& lm, const GridSpec& g, const AmbientFrame& seed,
                             const FieldGrid& f0, const LeafEmbedding& e, int order, const std::vector<int>& nodes);

struct RulingCheck {
  double on_confocal = 0;   // |Q_z(x_z¹)|
  double ivory_match = 0;   // |x_z¹ − ivory image of the chart point of V₁|
  double isotropy = 0;      // |Mᵀe₁ ± iMᵀe₂|²
  double ruling = 0;        // |wᵀAR_z^{-1}w| / ‖w‖²
  double alignment = 0;     // null direction vs Mᵀ(e₁ ± ie₂)
  double control = 0;       // same ratio for a random facet direction
};
// Degenerate seed x⁰ = x₀: facet rolled to x_z¹ meets its tangent space along a ruling.
RulingCheck ruling_facet_check(const QuadricSpec& q, const LMap& lm, const BacklundContext& ctx, const CVec& V0,
                               const CVec& Lam0, const CMat& R0, const CMat& R1, std::uint64_t seed);

// Solves Σ_j b_j h^α_j = 0 per node; returns max |b_j/b_1 − 1| (0 when the squares of a^j agree).
double asymptotic_correspondence(const FundamentalForms& ff, const std::vector<int>& nodes);

}  // namespace bq
