#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rog/expr.hpp"
#include "rog/symlin.hpp"

namespace rog {

class SpectrahedralCone;
using ConePtr = std::shared_ptr<const SpectrahedralCone>;

/// K = L ∩ S^n_+ with L stored as an orthonormal basis in svec coordinates.
/// Generators are unit vectors x with x x^T in L (the rank-1 certificate).
/// Built child cones are kept alongside the expression tree so that
/// compositional algorithms can recurse without rebuilding.
class SpectrahedralCone {
 public:
  /// `span` holds svec columns; it is orthonormalized here. Generators are
  /// normalized, deduplicated up to sign and checked against L.
  SpectrahedralCone(int n, const Mat& span, std::vector<Vec> generators,
                    ExprPtr expr = nullptr, std::vector<ConePtr> parts = {});

  int n() const { return n_; }
  int dim() const { return static_cast<int>(span_.cols()); }
  const Mat& span_svec() const { return span_; }
  const Mat& complement_svec() const { return complement_; }
  std::vector<SymMatrix> span_basis() const;
  /// Basis of the orthogonal complement of L, as matrices.
  std::vector<SymMatrix> constraint_basis() const;
  const std::vector<Vec>& generators() const { return generators_; }
  bool certificate_complete() const { return complete_; }
  const ExprPtr& expr() const { return expr_; }
  const std::vector<ConePtr>& parts() const { return parts_; }

  /// Frobenius distance from X to L.
  double distance_to_span(const Mat& x) const;
  Mat project_to_span(const Mat& x) const;
  /// True when x x^T lies in L up to tol * ||x||^2.
  bool contains_ray(const Vec& x, double tol = kDefaultTol) const;

 private:
  int n_;
  Mat span_;
  Mat complement_;
  std::vector<Vec> generators_;
  bool complete_ = false;
  ExprPtr expr_;
  std::vector<ConePtr> parts_;
};

/// Complex Hermitian analogue with inner product Re tr(A B^*).
class ComplexCone {
 public:
  ComplexCone(int n, const Mat& span, std::vector<CVec> generators,
              ExprPtr expr = nullptr);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(span_.cols()); }
  const Mat& span_hvec() const { return span_; }
  const std::vector<CVec>& generators() const { return generators_; }
  bool certificate_complete() const { return complete_; }
  const ExprPtr& expr() const { return expr_; }
  double distance_to_span(const CMat& x) const;

 private:
  int n_;
  Mat span_;
  std::vector<CVec> generators_;
  bool complete_ = false;
  ExprPtr expr_;
};

struct FaceHandle {
  Mat image_basis;  // orthonormal columns spanning H

  FaceHandle() = default;
  /// Orthonormalizes the columns of `spanning`.
  explicit FaceHandle(const Mat& spanning);
  static FaceHandle whole(int n);
  int dim() const { return static_cast<int>(image_basis.cols()); }
  bool contains(const Vec& x, double tol = 1e-8) const;
};

struct MldSet {
  std::vector<int> indices;
  Vec kernel_coeffs;
};

struct Reduction {
  ConePtr cone;   // non-degenerate, size m = degree
  Mat embedding;  // n x m, orthonormal columns; K = E K' E^T
};

bool membership(const SpectrahedralCone& k, const SymMatrix& x,
                double tol = kDefaultTol);
bool membership(const ComplexCone& k, const HermMatrix& x,
                double tol = kDefaultTol);
int degree(const SpectrahedralCone& k);
int dimension(const SpectrahedralCone& k);
Reduction reduce_nondegenerate(const SpectrahedralCone& k);
ConePtr face_of(const SpectrahedralCone& k, const FaceHandle& h);
/// Minimal face containing X ∈ K.
ConePtr face_containing(const SpectrahedralCone& k, const SymMatrix& x);
std::vector<FaceHandle> simplicity_partition(const SpectrahedralCone& k);
bool is_simple(const SpectrahedralCone& k);
std::vector<int> isolated_rays(const SpectrahedralCone& k);
std::vector<MldSet> find_mld_sets(const SpectrahedralCone& k, int max_size = 6);
/// Columns form a basis in whose coordinates X = diag(1..1,0..0).
Mat diagonalizing_basis(const SpectrahedralCone& k, const SymMatrix& x);

/// {y : x y^T + y x^T ∈ L}; always contains x when x x^T ∈ L.
Mat tangent_space(const SpectrahedralCone& k, const Vec& x);
/// True when a tangent direction independent of x exists.
bool has_tangent(const SpectrahedralCone& k, const Vec& x);

/// Congruence image { A X A^T : X ∈ K } carrying a Congruence expression.
ConePtr congruence(const ConePtr& k, const Mat& a);

}  // namespace rog
