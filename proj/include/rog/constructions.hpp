#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "rog/cone.hpp"
#include "rog/expr.hpp"

namespace rog {

using ComplexConePtr = std::shared_ptr<const ComplexCone>;
using BasisFunction = std::function<double(const Vec&)>;

/// Builds the cone described by `expr` (real kinds only).
ConePtr build(const ExprPtr& expr);
/// Builds a BlockToeplitz expression.
ComplexConePtr build_complex(const ExprPtr& expr);

ConePtr full_psd_cone(int n);
ConePtr diagonal_cone(int n);
ConePtr direct_sum(const ConePtr& a, const ConePtr& b);
ConePtr direct_sum(const std::vector<ConePtr>& parts);
ConePtr full_extension(const ConePtr& k, int n);
ConePtr intertwine(const ConePtr& a, const ConePtr& b, const GlueSpec& glue);
ConePtr chordal_cone(const ChordalGraph& g);
ConePtr hankel_cone(int blocks, int m = 1);
ConePtr tridiag_cone(int n);
ConePtr ternary_quartic_cone();
ConePtr codim1_cone(const SymMatrix& q);
ConePtr cross_ratio_cone(const std::array<double, 4>& angles);
ConePtr moment_cone_from_samples(const std::vector<BasisFunction>& u,
                                 const std::vector<Vec>& samples);
ConePtr moment_cone_from_monomials(const std::vector<std::vector<int>>& exponents,
                                   const std::vector<Vec>& samples);
ComplexConePtr block_toeplitz_cone(int blocks, int m);

/// Glue along coordinate vectors: columns e_{idx1[i]} and e_{idx2[i]}.
GlueSpec coordinate_glue(int n1, const std::vector<int>& idx1, int n2,
                         const std::vector<int>& idx2);

/// Maximum-cardinality-search visit order; earlier neighbours of each
/// vertex form a clique iff the graph is chordal.
std::vector<int> mcs_order(const ChordalGraph& g);
bool is_chordal(const ChordalGraph& g);
/// A chordless cycle of length >= 4, if the graph has one.
std::optional<std::vector<int>> chordless_cycle(const ChordalGraph& g);

/// (x, t x, ..., t^{blocks-1} x).
Vec moment_vector(double t, const Vec& x, int blocks);
/// Ternary quartic coordinates s(x) = (x1^2, x2^2, x3^2, x2x3, x1x3, x1x2).
Vec quartic_veronese(const Vec& x);

}  // namespace rog
