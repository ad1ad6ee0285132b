#pragma once

#include <complex>
#include <tuple>
#include <utility>

#include <Eigen/Dense>

namespace rog {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-8;

/// Real symmetric matrix. Construction from a square matrix symmetrizes it,
/// so entries(i,j) == entries(j,i) holds exactly afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  SymMatrix(const Mat& a);  // NOLINT(google-explicit-constructor)
  static SymMatrix zero(int n);
  static SymMatrix identity(int n);

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Mat m_;
};

/// Complex Hermitian matrix; construction takes the Hermitian part.
class HermMatrix {
 public:
  HermMatrix() = default;
  HermMatrix(const CMat& a);  // NOLINT(google-explicit-constructor)

  int n() const { return static_cast<int>(m_.rows()); }
  const CMat& mat() const { return m_; }

 private:
  CMat m_;
};

struct EigDecomp {
  Vec values;    // descending
  Mat vectors;   // orthonormal columns
};

struct HermEigDecomp {
  Vec values;    // descending
  CMat vectors;  // unitary columns
};

/// Cyclic Jacobi eigensolver. Throws numerical-failure past the sweep cap.
EigDecomp eig_sym(const SymMatrix& a);
HermEigDecomp eig_herm(const HermMatrix& a);

/// Number of eigenvalues with |lambda| > tol * max(1, |lambda|_max).
int numeric_rank(const SymMatrix& a, double tol = kDefaultTol);
int numeric_rank(const HermMatrix& a, double tol = kDefaultTol);

/// lambda_min(A) >= -tol * (1 + ||A||_F).
bool psd_check(const SymMatrix& a, double tol = kDefaultTol);
bool psd_check(const HermMatrix& a, double tol = kDefaultTol);

SymMatrix pseudo_inverse(const SymMatrix& a, double tol = kDefaultTol);

/// For M = [[A,B,0],[B^T,C,D],[0,D^T,E]] >= 0 returns (C1, C2) with
/// C1 = B^T A^+ B and C2 = C - C1.
std::pair<SymMatrix, SymMatrix> schur_split(const SymMatrix& m,
                                            std::tuple<int, int, int> blocks,
                                            double tol = kDefaultTol);

// Subspace and vectorization helpers shared across modules. Rank decisions
// use tol * s_max with an absolute floor of 1e-13.

/// Orthonormal basis of the column space (singular values above tol * s_max).
Mat orth(const Mat& a, double tol = 1e-10);
/// Orthonormal basis of the right null space.
Mat null_space(const Mat& a, double tol = 1e-10);
/// Orthonormal basis of the intersection of two column spaces.
Mat intersect(const Mat& a, const Mat& b, double tol = 1e-10);
/// Rank of a general matrix via SVD.
int matrix_rank(const Mat& a, double tol = 1e-10);

/// Orthonormal symmetric vectorization (off-diagonals scaled by sqrt 2),
/// upper triangle in row-major order.
Vec svec(const Mat& a);
Mat smat(const Vec& v, int n);
int svec_size(int n);
/// svec of x x^T without forming the outer product.
Vec svec_outer(const Vec& x);

/// Hermitian analogue over the real inner product Re tr(A B^*).
Vec hvec(const CMat& a);
CMat hmat(const Vec& v, int n);

/// Positive square root on the image, zero elsewhere.
Mat psd_sqrt(const SymMatrix& a, double tol = kDefaultTol);

}  // namespace rog
