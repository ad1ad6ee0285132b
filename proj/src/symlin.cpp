#include "rog/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rog/error.hpp"

namespace rog {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kNumericalFailure: return "numerical-failure";
    case ErrorKind::kMissingCertificate: return "missing-certificate";
    case ErrorKind::kOracleUnavailable: return "oracle-unavailable";
    case ErrorKind::kNoRay: return "no-ray";
    case ErrorKind::kNonChordal: return "non-chordal";
    case ErrorKind::kInvalidGlue: return "invalid-glue";
    case ErrorKind::kOutOfCatalog: return "out-of-catalog";
    case ErrorKind::kNotStructured: return "not-simultaneously-structured";
  }
  return "unknown";
}

SymMatrix::SymMatrix(const Mat& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidInput, "SymMatrix: matrix is not square");
  }
  m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::zero(int n) { return SymMatrix(Mat::Zero(n, n)); }
SymMatrix SymMatrix::identity(int n) { return SymMatrix(Mat::Identity(n, n)); }

HermMatrix::HermMatrix(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidInput, "HermMatrix: matrix is not square");
  }
  m_ = 0.5 * (a + a.adjoint());
  for (int i = 0; i < m_.rows(); ++i) m_(i, i) = m_(i, i).real();
}

namespace {

constexpr int kMaxSweeps = 100;

// One routine serves both the real and the Hermitian case: the rotation for
// (p,q) first rotates the phase of a_pq onto the real axis, then applies the
// classical real Jacobi rotation.
template <typename MatT>
void jacobi(MatT& a, MatT& v) {
  using Scalar = typename MatT::Scalar;
  const int n = static_cast<int>(a.rows());
  v = MatT::Identity(n, n);
  const double scale = a.norm();
  if (n <= 1 || scale == 0.0) return;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) return;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Scalar g = a(p, q);
        const double mag = std::abs(g);
        if (mag <= 1e-300) continue;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Scalar phase = g / mag;  // unit scalar; 1 or -1 in the real case
        // J restricted to (p,q): [[c, s*phase], [-s*conj(phase)... ]] written
        // as column operations: col_p' = c col_p - s conj(phase) col_q,
        // col_q' = s phase col_p + c col_q.
        const Scalar sp = s * phase;
        const Scalar sc = s * Eigen::numext::conj(phase);
        for (int k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - sc * akq;
          a(k, q) = sp * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - Eigen::numext::conj(sc) * aqk;
          a(q, k) = Eigen::numext::conj(sp) * apk + c * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = std::real(a(p, p));
        a(q, q) = std::real(a(q, q));
        for (int k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - sc * vkq;
          v(k, q) = sp * vkp + c * vkq;
        }
      }
    }
  }
  throw Error(ErrorKind::kNumericalFailure,
              "eig: Jacobi iteration did not converge");
}

template <typename MatT>
std::pair<Vec, MatT> sorted_eig(const MatT& input) {
  MatT a = input;
  MatT v;
  jacobi(a, v);
  const int n = static_cast<int>(a.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::real(a(i, i)) > std::real(a(j, j));
  });
  Vec values(n);
  MatT vectors(n, n);
  for (int k = 0; k < n; ++k) {
    values(k) = std::real(a(order[k], order[k]));
    vectors.col(k) = v.col(order[k]);
  }
  return {values, vectors};
}

int count_rank(const Vec& values, double tol) {
  double top = 0.0;
  for (int i = 0; i < values.size(); ++i) top = std::max(top, std::abs(values(i)));
  const double thr = tol * std::max(1.0, top);
  int r = 0;
  for (int i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) > thr) ++r;
  }
  return r;
}

}  // namespace

EigDecomp eig_sym(const SymMatrix& a) {
  auto [values, vectors] = sorted_eig<Mat>(a.mat());
  return {values, vectors};
}

HermEigDecomp eig_herm(const HermMatrix& a) {
  auto [values, vectors] = sorted_eig<CMat>(a.mat());
  return {values, vectors};
}

int numeric_rank(const SymMatrix& a, double tol) {
  return count_rank(eig_sym(a).values, tol);
}

int numeric_rank(const HermMatrix& a, double tol) {
  return count_rank(eig_herm(a).values, tol);
}

bool psd_check(const SymMatrix& a, double tol) {
  if (a.n() == 0) return true;
  const Vec values = eig_sym(a).values;
  return values(values.size() - 1) >= -tol * (1.0 + a.mat().norm());
}

bool psd_check(const HermMatrix& a, double tol) {
  if (a.n() == 0) return true;
  const Vec values = eig_herm(a).values;
  return values(values.size() - 1) >= -tol * (1.0 + a.mat().norm());
}

SymMatrix pseudo_inverse(const SymMatrix& a, double tol) {
  const int n = a.n();
  if (n == 0) return a;
  const EigDecomp e = eig_sym(a);
  const double top = e.values.cwiseAbs().maxCoeff();
  Mat out = Mat::Zero(n, n);
  if (top == 0.0) return SymMatrix(out);
  for (int k = 0; k < n; ++k) {
    if (std::abs(e.values(k)) > tol * top) {
      out += e.vectors.col(k) * e.vectors.col(k).transpose() / e.values(k);
    }
  }
  return SymMatrix(out);
}

std::pair<SymMatrix, SymMatrix> schur_split(const SymMatrix& m,
                                            std::tuple<int, int, int> blocks,
                                            double tol) {
  const auto [na, nb, nc] = blocks;
  if (na < 0 || nb < 0 || nc < 0 || na + nb + nc != m.n()) {
    throw Error(ErrorKind::kInvalidInput, "schur_split: block sizes do not match");
  }
  const Mat& x = m.mat();
  const double scale = 1.0 + x.norm();
  if (na > 0 && nc > 0 && x.block(0, na + nb, na, nc).norm() > tol * scale) {
    throw Error(ErrorKind::kInvalidInput, "schur_split: corner block is not zero");
  }
  if (!psd_check(m, tol)) {
    throw Error(ErrorKind::kInvalidInput, "schur_split: matrix is not PSD");
  }
  const Mat a = x.topLeftCorner(na, na);
  const Mat b = x.block(0, na, na, nb);
  const Mat c = x.block(na, na, nb, nb);
  const Mat c1 = b.transpose() * pseudo_inverse(SymMatrix(a), tol).mat() * b;
  return {SymMatrix(c1), SymMatrix(Mat(c - c1))};
}

namespace {

// Singular values below kAbsFloor are noise regardless of the relative tolerance.
constexpr double kAbsFloor = 1e-13;

int svd_rank(const Vec& s, double tol) {
  if (s.size() == 0) return 0;
  const double cut = std::max(tol * s(0), kAbsFloor);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

}  // namespace

Mat orth(const Mat& a, double tol) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  return svd.matrixU().leftCols(svd_rank(s, tol));
}

Mat null_space(const Mat& a, double tol) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  return svd.matrixV().rightCols(n - svd_rank(s, tol));
}

Mat intersect(const Mat& a, const Mat& b, double tol) {
  const Mat qa = orth(a, tol);
  const Mat qb = orth(b, tol);
  if (qa.cols() == 0 || qb.cols() == 0) return Mat(a.rows(), 0);
  Mat stacked(qa.rows(), qa.cols() + qb.cols());
  stacked << qa, -qb;
  const Mat ker = null_space(stacked, 1e-8);
  if (ker.cols() == 0) return Mat(a.rows(), 0);
  return orth(qa * ker.topRows(qa.cols()), tol);
}

int matrix_rank(const Mat& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd_rank(svd.singularValues(), tol);
}

int svec_size(int n) { return n * (n + 1) / 2; }

Vec svec(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  Vec v(svec_size(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    v(k++) = a(i, i);
    for (int j = i + 1; j < n; ++j) v(k++) = M_SQRT2 * 0.5 * (a(i, j) + a(j, i));
  }
  return v;
}

Mat smat(const Vec& v, int n) {
  Mat a(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    a(i, i) = v(k++);
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = a(j, i) = v(k++) / M_SQRT2;
    }
  }
  return a;
}

Vec svec_outer(const Vec& x) {
  const int n = static_cast<int>(x.size());
  Vec v(svec_size(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    v(k++) = x(i) * x(i);
    for (int j = i + 1; j < n; ++j) v(k++) = M_SQRT2 * x(i) * x(j);
  }
  return v;
}

Vec hvec(const CMat& a) {
  const int n = static_cast<int>(a.rows());
  Vec v(n * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    v(k++) = a(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> z = 0.5 * (a(i, j) + std::conj(a(j, i)));
      v(k++) = M_SQRT2 * z.real();
      v(k++) = M_SQRT2 * z.imag();
    }
  }
  return v;
}

CMat hmat(const Vec& v, int n) {
  CMat a(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    a(i, i) = v(k++);
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> z(v(k) / M_SQRT2, v(k + 1) / M_SQRT2);
      k += 2;
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

Mat psd_sqrt(const SymMatrix& a, double tol) {
  const EigDecomp e = eig_sym(a);
  const int n = a.n();
  Mat out = Mat::Zero(n, n);
  if (n == 0) return out;
  const double top = std::max(0.0, e.values(0));
  for (int k = 0; k < n; ++k) {
    if (e.values(k) > tol * top && e.values(k) > 0.0) {
      out += std::sqrt(e.values(k)) * e.vectors.col(k) * e.vectors.col(k).transpose();
    }
  }
  return out;
}

}  // namespace rog
