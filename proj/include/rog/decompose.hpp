#pragma once

#include <optional>
#include <random>
#include <vector>

#include "rog/cone.hpp"

namespace rog {

using Rng = std::mt19937_64;

struct RankOneAtom {
  double weight = 0.0;
  Vec vector;  // unit norm
};

struct ComplexAtom {
  double weight = 0.0;
  CVec vector;  // unit norm
};

struct Decomposition {
  std::vector<RankOneAtom> atoms;
  double residual = 0.0;

  Mat sum(int n) const;
};

struct ComplexDecomposition {
  std::vector<ComplexAtom> atoms;
  double residual = 0.0;

  CMat sum(int n) const;
};

/// Returns x ∈ H with x x^T ∈ L, or nullopt when the search finds none.
/// Leaf kinds use closed-form rules; combinator nodes recurse into their
/// parts; cones without structure fall back to a multi-start least-squares
/// search over H. With `rng` set, the returned ray is randomized.
std::optional<Vec> find_ray(const SpectrahedralCone& k, const Mat& h,
                            Rng* rng = nullptr);
/// As find_ray, but throws a no-ray error when nothing is found.
Vec extreme_ray_oracle(const SpectrahedralCone& k, const FaceHandle& h,
                       Rng* rng = nullptr);

/// Peels rank-1 extremes off X until it vanishes; returns rank(X) atoms.
Decomposition carath_decompose(const SpectrahedralCone& k, const SymMatrix& x,
                               double tol = kDefaultTol);
Decomposition decompose_full_extension(const SpectrahedralCone& k,
                                       const SymMatrix& x);
Decomposition decompose_intertwining(const SpectrahedralCone& k,
                                     const SymMatrix& x);
/// Recursive decomposition following the cone's construction tree; leaves
/// use the Carathéodory loop.
Decomposition decompose_by_expr(const SpectrahedralCone& k, const SymMatrix& x);
Decomposition decompose_hankel(const SymMatrix& x, int blocks, int m);
ComplexDecomposition decompose_block_toeplitz(const HermMatrix& t, int blocks,
                                              int m);

}  // namespace rog
