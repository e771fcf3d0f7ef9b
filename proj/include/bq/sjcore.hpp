#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bq/types.hpp"

namespace bq {

struct SJBlock {
  cd a;
  int p = 1;
};

struct SJSpec {
  std::vector<SJBlock> blocks;
  int dim() const;
};

// √a = √r e^{iθ} for a = r e^{2iθ}, −π ≤ 2θ < π.
cd branch_sqrt(cd a);

// Generalized binomial coefficient C(alpha, k).
double binom(double alpha, int k);

// f_j = (e_{2j−1} + i e_{2j})/√2 in C^m (1-based j).
CVec isotropic_vector(int j, int m);
CVec unit_vector(int j, int m);  // 1-based

// Symmetric nilpotent block of size p.
CMat nilpotent_block(int p);

CMat build_sj(const SJSpec& spec);

// √(c I + d J_p).
CMat sqrt_affine_block(cd c, cd d, int p);

CMat sqrt_sj(const SJSpec& spec);

// √(I − zA) for A realized from spec.
CMat sqrt_resolvent(const SJSpec& spec, cd z);

// √(J_p + f̄₁f̄₁ᵀ), exact via the cyclic structure of the matrix.
CMat sqrt_cyclic_block(int p);

// Complete pairwise-orthogonal unit rows to an element of O_m(C).
CMat orth_complete(const std::vector<CVec>& rows, int m, std::uint64_t seed, int max_retries = 32);

CMat random_orthogonal(int m, std::uint64_t seed, double scale = 0.5);

// max |MᵀM − I| entry.
double orth_defect(const CMat& m);
// Nearest-orthogonal correction R(RᵀR)^{-1/2} for a nearly orthogonal R.
CMat orth_project(const CMat& m);

// Random complex vector with iid N(0,1) real and imaginary parts times scale.
CVec random_cvec(int m, std::mt19937_64& rng, double scale = 1.0);
cd random_cd(std::mt19937_64& rng, double scale = 1.0);

}  // namespace bq
