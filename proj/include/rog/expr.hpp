#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rog/symlin.hpp"

namespace rog {

struct ChordalGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based, unordered

  bool has_edge(int i, int j) const;
  std::vector<std::vector<int>> adjacency() const;
};

/// Injections of the shared full face into the two glued cones, and
/// optionally the coordinate maps f1 (n x n1), f2 (n x n2) of the result.
/// Empty f1/f2 select the canonical (H1', H, H2') coordinates.
struct GlueSpec {
  Mat iota1;  // n1 x k
  Mat iota2;  // n2 x k
  Mat f1;
  Mat f2;

  int rank() const { return static_cast<int>(iota1.cols()); }
};

enum class ExprKind {
  kFullPsd,
  kDiagonal,
  kHankel,
  kTridiag,
  kChordal,
  kCodim1,
  kTernaryQuartic,
  kCrossRatio,
  kMomentCone,
  kBlockToeplitz,
  kDirectSum,
  kFullExtension,
  kIntertwining,
  kCongruence,
  kFace,
};

const char* to_string(ExprKind kind);

struct ConeExpr;
using ExprPtr = std::shared_ptr<const ConeExpr>;

/// Construction tree. Only the fields relevant to `kind` are populated.
/// Congruence(child, A) denotes { A Y A^T : Y in child }; Face(child, U)
/// denotes the face of child on the column space of U.
struct ConeExpr {
  ExprKind kind = ExprKind::kFullPsd;
  int n = 0;                        // FullPsd, Diagonal, Tridiag, FullExtension size
  int blocks = 0;                   // Hankel/BlockToeplitz: number of blocks
  int m = 1;                        // Hankel/BlockToeplitz: block size
  Mat matrix;                       // Codim1 Q, Congruence A, Face U
  std::array<double, 4> angles{};   // CrossRatio
  ChordalGraph graph;               // Chordal
  std::vector<std::vector<int>> monomials;  // MomentCone exponents (may be empty)
  std::vector<Vec> points;          // MomentCone sample points
  std::vector<Vec> sample_vectors;  // MomentCone evaluated s(x)
  GlueSpec glue;                    // Intertwining
  std::vector<ExprPtr> children;

  static ExprPtr full_psd(int n);
  static ExprPtr diagonal(int n);
  static ExprPtr hankel(int blocks, int m = 1);
  static ExprPtr tridiag(int n);
  static ExprPtr chordal(ChordalGraph g);
  static ExprPtr codim1(const Mat& q);
  static ExprPtr ternary_quartic();
  static ExprPtr cross_ratio(std::array<double, 4> angles);
  static ExprPtr moment_monomials(std::vector<std::vector<int>> exponents,
                                  std::vector<Vec> points);
  static ExprPtr block_toeplitz(int blocks, int m);
  static ExprPtr direct_sum(std::vector<ExprPtr> children);
  static ExprPtr full_extension(ExprPtr child, int n);
  static ExprPtr intertwining(ExprPtr a, ExprPtr b, GlueSpec glue);
  static ExprPtr congruence(ExprPtr child, const Mat& a);
  static ExprPtr face(ExprPtr child, const Mat& u);
};

}  // namespace rog
