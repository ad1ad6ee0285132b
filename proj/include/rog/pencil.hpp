#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rog/decompose.hpp"
#include "rog/symlin.hpp"

namespace rog {

struct PencilBlock {
  Mat basis;          // n x d_k, orthonormal columns spanning H_k
  double angle = 0.0; // phi_k in [0, pi)
  Mat phi;            // d_k x d_k form Phi_k in the basis above
};

/// R^n = H_0 + sum H_k with Q1 = sum cos(phi_k) Phi_k, Q2 = sum sin(phi_k) Phi_k.
struct PencilDecomposition {
  Mat h0;  // n x d_0, orthonormal basis of ker Q1 ∩ ker Q2
  std::vector<PencilBlock> blocks;
  double error = 0.0;  // reconstruction error in block coordinates
};

/// Throws not-structured when the pencil lacks n real independent eigenvectors.
PencilDecomposition pencil_decompose(const SymMatrix& q1, const SymMatrix& q2,
                                     Rng* rng = nullptr);

/// Rows (x^T Q x, 2 x^T Q y, y^T Q y) for each form.
Mat rank2_matrix(const std::vector<SymMatrix>& qs, const Vec& x, const Vec& y);

/// The PSD rank-2 element a xx^T + b(xy^T + yx^T) + c yy^T generating the
/// face on span{x, y}, when that face is an extreme ray of rank 2.
std::optional<SymMatrix> rank2_extreme_check(const std::vector<SymMatrix>& qs, const Vec& x,
                                             const Vec& y);

double biquartic_p(const SymMatrix& q1, const SymMatrix& q2, const Vec& x, const Vec& y);

enum class Codim2Case { kDependentForms, kSharedFactor, kHasRank2Extremes, kInconclusive };
const char* to_string(Codim2Case c);

struct Codim2Structure {
  Codim2Case kind = Codim2Case::kInconclusive;
  // kSharedFactor: Q1 = u q1^T + q1 u^T, Q2 = u q2^T + q2 u^T.
  Vec u;
  Vec q1;
  Vec q2;
  // kHasRank2Extremes: sampled witness with p(x, y) < 0.
  Vec x;
  Vec y;
  int samples = 0;
  std::string note;
};

/// Sampled analysis of the cone {X >= 0 : <X,Q1> = <X,Q2> = 0}. Case
/// kDependentForms is sampled evidence only.
Codim2Structure codim2_structure(const SymMatrix& q1, const SymMatrix& q2, Rng& rng,
                                 int z_seeds = 1000, int p_samples = 10000);

}  // namespace rog
