#pragma once

#include <map>
#include <vector>

#include "bq/backlund.hpp"

namespace bq {

// R₃ = (D₂ − D₁R₂R₁ᵀ)(D₂R₂R₁ᵀ − D₁)^{-1}R₀.
CMat bpt_compose(const CMat& R0, const CMat& R1, const CMat& R2, const CMat& D1, const CMat& D2,
                 double cond_max = 1e12);
// |(D₂R₃R₀ᵀ + D₁)(D₂R₂R₁ᵀ − D₁) − (1/z₂ − 1/z₁)I|
double bpt_scalar_residual(const CMat& R0, const CMat& R1, const CMat& R2, const CMat& R3, const CMat& D1,
                           const CMat& D2, cd z1, cd z2);
// |(D₂ − R₂R₁ᵀD₁)(D₂R₂R₁ᵀ − D₁) − (R₂R₁ᵀD₂ − D₁)(D₂ − D₁R₂R₁ᵀ)|
double bpt_orth_identity(const CMat& R1, const CMat& R2, const CMat& D1, const CMat& D2);

struct BptGridReport {
  double orth = 0;
  double scalar = 0;
  double derivative = 0;  // displayed derivative identity for R₃R₀ᵀ
  double riccati_1 = 0;   // R₃ over seed (R₁, z₂)
  double riccati_2 = 0;   // R₃ over seed (R₂, z₁)
  double max() const { return std::max({orth, scalar, derivative, riccati_1, riccati_2}); }
};
BptGridReport bpt_verify(const BacklundContext& c1, const BacklundContext& c2, const GridSpec& g,
                         const std::vector<CMat>& R0, const std::vector<CMat>& R1, const std::vector<CMat>& R2,
                         const std::vector<CMat>& R3, int order, const std::vector<int>& nodes);

struct M3Result {
  CMat R7;
  std::vector<CMat> candidates;  // four formula routes, then two nested superpositions
  double discrepancy = 0;
};
M3Result m3_r7(const CMat& R0, const CMat& R1, const CMat& R2, const CMat& R4, const CMat& D1, const CMat& D2,
               const CMat& D3, cd z1, cd z2, cd z3, double cond_max = 1e12);

// Lattice sites are subsets of the parameter list (bitmask); fields are per grid node.
struct LatticeParam {
  cd z;
  CMat D;
};
struct Lattice {
  std::map<unsigned, std::vector<CMat>> sites;
  std::vector<unsigned> holes;
};
// ordering: parameter priority; for |T| ≥ 2 the two last members of T in this order are eliminated.
Lattice lattice_build(const std::vector<CMat>& R0, const std::vector<std::vector<CMat>>& single,
                      const std::vector<LatticeParam>& params, const std::vector<unsigned>& targets,
                      const std::vector<int>& ordering);

struct LatticeCheck {
  double squares = 0;  // worst scalar/orthogonality residual over elementary squares
  double cubes = 0;    // worst lattice-vs-M₃ mismatch over elementary cubes
  int n_squares = 0, n_cubes = 0;
};
LatticeCheck lattice_check(const Lattice& lat, const std::vector<LatticeParam>& params);

}  // namespace bq
