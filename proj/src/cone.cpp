#include "rog/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rog/decompose.hpp"
#include "rog/error.hpp"

namespace rog {

namespace {

constexpr double kRayEqual = 1e-8;

std::vector<Vec> normalize_unique(std::vector<Vec> gens) {
  std::vector<Vec> out;
  out.reserve(gens.size());
  for (Vec& x : gens) {
    const double nx = x.norm();
    if (!(nx > 1e-300) || !std::isfinite(nx)) continue;
    x /= nx;
    bool seen = false;
    for (const Vec& y : out) {
      if (std::abs(x.dot(y)) > 1.0 - kRayEqual) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(std::move(x));
  }
  return out;
}

Mat outer_svecs(const std::vector<Vec>& gens, int n) {
  Mat g(svec_size(n), static_cast<int>(gens.size()));
  for (size_t i = 0; i < gens.size(); ++i) g.col(static_cast<int>(i)) = svec_outer(gens[i]);
  return g;
}

// Matrix of the map svec(C) -> svec(U C U^T) for U with k columns.
Mat congruence_map(const Mat& u) {
  const int n = static_cast<int>(u.rows());
  const int k = static_cast<int>(u.cols());
  Mat t(svec_size(n), svec_size(k));
  Vec e = Vec::Zero(svec_size(k));
  for (int c = 0; c < svec_size(k); ++c) {
    e.setZero();
    e(c) = 1.0;
    t.col(c) = svec(u * smat(e, k) * u.transpose());
  }
  return t;
}

// Basis (in svec of size k) of {C : U C U^T ∈ L}.
Mat pulled_back_span(const SpectrahedralCone& k, const Mat& u) {
  const Mat t = congruence_map(u);
  if (k.complement_svec().cols() == 0) return Mat::Identity(t.cols(), t.cols());
  return null_space(k.complement_svec().transpose() * t, 1e-9);
}

}  // namespace

SpectrahedralCone::SpectrahedralCone(int n, const Mat& span,
                                     std::vector<Vec> generators, ExprPtr expr,
                                     std::vector<ConePtr> parts)
    : n_(n), expr_(std::move(expr)), parts_(std::move(parts)) {
  if (n < 0 || span.rows() != svec_size(n)) {
    throw Error(ErrorKind::kInvalidInput, "cone: span basis has wrong size");
  }
  span_ = orth(span, 1e-10);
  complement_ = null_space(span_.transpose(), 1e-10);
  if (span_.cols() == 0) complement_ = Mat::Identity(svec_size(n), svec_size(n));
  for (const Vec& x : generators) {
    if (x.size() != n) {
      throw Error(ErrorKind::kInvalidInput, "cone: generator has wrong length");
    }
  }
  generators_ = normalize_unique(std::move(generators));
  for (const Vec& x : generators_) {
    if (!contains_ray(x, 1e-8)) {
      throw Error(ErrorKind::kInvalidInput,
                  "cone: certificate vector x with x x^T outside L");
    }
  }
  complete_ = !generators_.empty() &&
              matrix_rank(outer_svecs(generators_, n), 1e-9) == dim();
}

std::vector<SymMatrix> SpectrahedralCone::span_basis() const {
  std::vector<SymMatrix> out;
  for (int c = 0; c < span_.cols(); ++c) out.emplace_back(smat(span_.col(c), n_));
  return out;
}

std::vector<SymMatrix> SpectrahedralCone::constraint_basis() const {
  std::vector<SymMatrix> out;
  for (int c = 0; c < complement_.cols(); ++c) {
    out.emplace_back(smat(complement_.col(c), n_));
  }
  return out;
}

double SpectrahedralCone::distance_to_span(const Mat& x) const {
  if (complement_.cols() == 0) return 0.0;
  return (complement_.transpose() * svec(x)).norm();
}

Mat SpectrahedralCone::project_to_span(const Mat& x) const {
  return smat(span_ * (span_.transpose() * svec(x)), n_);
}

bool SpectrahedralCone::contains_ray(const Vec& x, double tol) const {
  if (complement_.cols() == 0) return true;
  return (complement_.transpose() * svec_outer(x)).norm() <= tol * x.squaredNorm();
}

ComplexCone::ComplexCone(int n, const Mat& span, std::vector<CVec> generators,
                         ExprPtr expr)
    : n_(n), expr_(std::move(expr)) {
  if (span.rows() != n * n) {
    throw Error(ErrorKind::kInvalidInput, "complex cone: span basis has wrong size");
  }
  span_ = orth(span, 1e-10);
  for (CVec& x : generators) {
    const double nx = x.norm();
    if (nx > 1e-300) generators_.push_back(x / nx);
  }
  Mat g(n * n, static_cast<int>(generators_.size()));
  for (size_t i = 0; i < generators_.size(); ++i) {
    const CVec& x = generators_[i];
    if (distance_to_span(x * x.adjoint()) > 1e-8) {
      throw Error(ErrorKind::kInvalidInput,
                  "complex cone: certificate vector outside L");
    }
    g.col(static_cast<int>(i)) = hvec(x * x.adjoint());
  }
  complete_ = !generators_.empty() && matrix_rank(g, 1e-9) == dim();
}

double ComplexCone::distance_to_span(const CMat& x) const {
  const Vec v = hvec(x);
  return (v - span_ * (span_.transpose() * v)).norm();
}

FaceHandle::FaceHandle(const Mat& spanning) : image_basis(orth(spanning, 1e-10)) {}

FaceHandle FaceHandle::whole(int n) {
  FaceHandle h;
  h.image_basis = Mat::Identity(n, n);
  return h;
}

bool FaceHandle::contains(const Vec& x, double tol) const {
  const Vec r = x - image_basis * (image_basis.transpose() * x);
  return r.norm() <= tol * std::max(1.0, x.norm());
}

bool membership(const SpectrahedralCone& k, const SymMatrix& x, double tol) {
  if (x.n() != k.n()) {
    throw Error(ErrorKind::kInvalidInput, "membership: dimension mismatch");
  }
  return k.distance_to_span(x.mat()) <= tol * (1.0 + x.mat().norm()) &&
         psd_check(x, tol);
}

bool membership(const ComplexCone& k, const HermMatrix& x, double tol) {
  if (x.n() != k.n()) {
    throw Error(ErrorKind::kInvalidInput, "membership: dimension mismatch");
  }
  return k.distance_to_span(x.mat()) <= tol * (1.0 + x.mat().norm()) &&
         psd_check(x, tol);
}

namespace {

Mat generator_gram(const SpectrahedralCone& k) {
  if (k.generators().empty()) {
    throw Error(ErrorKind::kMissingCertificate, "cone has an empty certificate");
  }
  Mat s = Mat::Zero(k.n(), k.n());
  for (const Vec& x : k.generators()) s += x * x.transpose();
  return s;
}

}  // namespace

int degree(const SpectrahedralCone& k) {
  return numeric_rank(SymMatrix(generator_gram(k)));
}

int dimension(const SpectrahedralCone& k) { return k.dim(); }

Reduction reduce_nondegenerate(const SpectrahedralCone& k) {
  const Mat s = generator_gram(k);
  const EigDecomp e = eig_sym(SymMatrix(s));
  const int m = numeric_rank(SymMatrix(s));
  if (m == k.n()) {
    return {std::make_shared<SpectrahedralCone>(k), Mat::Identity(k.n(), k.n())};
  }
  const Mat u = e.vectors.leftCols(m);
  const Mat span = pulled_back_span(k, u);
  std::vector<Vec> gens;
  for (const Vec& x : k.generators()) gens.push_back(u.transpose() * x);
  auto parent = std::make_shared<SpectrahedralCone>(k);
  auto reduced = std::make_shared<SpectrahedralCone>(
      m, span, std::move(gens), ConeExpr::congruence(k.expr(), u.transpose()),
      std::vector<ConePtr>{parent});
  return {reduced, u};
}

namespace {

ConePtr build_face(const SpectrahedralCone& k, const Mat& u, const Mat* witness) {
  const int n = k.n();
  const Mat face_span = congruence_map(u) * pulled_back_span(k, u);
  const FaceHandle h(u);
  std::vector<Vec> gens;
  for (const Vec& x : k.generators()) {
    if (h.contains(x, 1e-8)) gens.push_back(x);
  }
  const auto parent = std::make_shared<SpectrahedralCone>(k);
  const ExprPtr expr = ConeExpr::face(k.expr(), u);
  auto make = [&](std::vector<Vec> g) {
    return std::make_shared<SpectrahedralCone>(n, face_span, std::move(g), expr,
                                               std::vector<ConePtr>{parent});
  };
  ConePtr face = make(gens);
  if (face->certificate_complete() || face->dim() == 0) return face;

  // Grow the certificate: decompose relative-interior points of the face
  // perturbed inside the face span and restricted to their own image.
  Rng rng(0x5eed'face'0001ULL);
  std::normal_distribution<double> gauss;
  Mat x0 = Mat::Zero(n, n);
  if (witness != nullptr) x0 = *witness;
  for (const Vec& g : face->generators()) x0 += g * g.transpose();
  if (x0.norm() == 0.0) {
    if (auto ray = find_ray(k, u, &rng)) {
      gens.push_back(*ray);
      x0 += *ray * ray->transpose();
    }
  }
  for (int attempt = 0; attempt < 4 * face->dim() + 8; ++attempt) {
    face = make(gens);
    if (face->certificate_complete()) return face;
    const EigDecomp e = eig_sym(SymMatrix(x0));
    const int r = numeric_rank(SymMatrix(x0));
    if (r == 0) break;
    const Mat img = e.vectors.leftCols(r);
    // Face-span directions supported on Im X0.
    const Mat local = congruence_map(img) * pulled_back_span(k, img);
    Vec coeff(local.cols());
    for (int i = 0; i < coeff.size(); ++i) coeff(i) = gauss(rng);
    Mat d = smat(local * coeff, n);
    const Mat c = img.transpose() * x0 * img;
    const Mat dl = img.transpose() * d * img;
    const Mat p = psd_sqrt(SymMatrix(Mat(c.inverse())));
    const double lmax = eig_sym(SymMatrix(Mat(-p * dl * p))).values(0);
    const double step = lmax > 0 ? 0.5 / lmax : 1.0;
    const Mat x = x0 + step * d;
    try {
      for (const RankOneAtom& a : carath_decompose(k, SymMatrix(x)).atoms) {
        gens.push_back(a.vector);
      }
    } catch (const Error&) {
    }
    if (auto ray = find_ray(k, u, &rng)) {
      gens.push_back(*ray);
      x0 += *ray * ray->transpose();
    }
  }
  return make(gens);
}

}  // namespace

ConePtr face_of(const SpectrahedralCone& k, const FaceHandle& h) {
  if (h.image_basis.rows() != k.n()) {
    throw Error(ErrorKind::kInvalidInput, "face_of: subspace has wrong ambient size");
  }
  return build_face(k, h.image_basis, nullptr);
}

ConePtr face_containing(const SpectrahedralCone& k, const SymMatrix& x) {
  const EigDecomp e = eig_sym(x);
  const int r = numeric_rank(x);
  return build_face(k, e.vectors.leftCols(r), &x.mat());
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Connected components of the vector matroid of the generators: every
// fundamental circuit with respect to a greedy basis is merged.
std::vector<std::vector<int>> matroid_components(const std::vector<Vec>& gens, int n) {
  const int g = static_cast<int>(gens.size());
  UnionFind uf(g);
  std::vector<int> basis;
  Mat q(n, 0);
  for (int i = 0; i < g; ++i) {
    Vec r = gens[i] - q * (q.transpose() * gens[i]);
    if (r.norm() > 1e-8) {
      basis.push_back(i);
      q.conservativeResize(n, q.cols() + 1);
      q.col(q.cols() - 1) = r.normalized();
    }
  }
  Mat b(n, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) b.col(static_cast<int>(j)) = gens[basis[j]];
  const auto qr = b.colPivHouseholderQr();
  for (int i = 0; i < g; ++i) {
    if (std::find(basis.begin(), basis.end(), i) != basis.end()) continue;
    const Vec c = qr.solve(gens[i]);
    const double scale = c.cwiseAbs().maxCoeff();
    for (int j = 0; j < c.size(); ++j) {
      if (std::abs(c(j)) > 1e-9 * std::max(1.0, scale)) uf.unite(i, basis[j]);
    }
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> slot(g, -1);
  for (int i = 0; i < g; ++i) {
    const int root = uf.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[slot[root]].push_back(i);
  }
  return comps;
}

void require_nondegenerate(const SpectrahedralCone& k, const char* op) {
  if (degree(k) != k.n()) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(op) + ": cone is degenerate; call reduce_nondegenerate first");
  }
}

}  // namespace

std::vector<FaceHandle> simplicity_partition(const SpectrahedralCone& k) {
  require_nondegenerate(k, "simplicity_partition");
  std::vector<FaceHandle> out;
  for (const auto& comp : matroid_components(k.generators(), k.n())) {
    Mat cols(k.n(), static_cast<int>(comp.size()));
    for (size_t j = 0; j < comp.size(); ++j) cols.col(static_cast<int>(j)) = k.generators()[comp[j]];
    out.emplace_back(cols);
  }
  return out;
}

bool is_simple(const SpectrahedralCone& k) { return simplicity_partition(k).size() == 1; }

std::vector<int> isolated_rays(const SpectrahedralCone& k) {
  require_nondegenerate(k, "isolated_rays");
  std::vector<int> out;
  for (const auto& comp : matroid_components(k.generators(), k.n())) {
    if (comp.size() == 1) out.push_back(comp.front());
  }
  return out;
}

std::vector<MldSet> find_mld_sets(const SpectrahedralCone& k, int max_size) {
  if (k.generators().empty()) {
    throw Error(ErrorKind::kMissingCertificate, "find_mld_sets: empty certificate");
  }
  const auto& gens = k.generators();
  const int g = static_cast<int>(gens.size());
  std::vector<MldSet> out;
  std::vector<int> chosen;
  // Extends independent sets only; a set that turns dependent is an MLD
  // candidate and is never extended further.
  auto columns = [&](const std::vector<int>& idx) {
    Mat m(k.n(), static_cast<int>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) m.col(static_cast<int>(j)) = gens[idx[j]];
    return m;
  };
  auto rec = [&](auto&& self, int start) -> void {
    for (int i = start; i < g; ++i) {
      chosen.push_back(i);
      const Mat m = columns(chosen);
      const int size = static_cast<int>(chosen.size());
      const int r = matrix_rank(m, 1e-9);
      if (r == size) {
        if (size < max_size) self(self, i + 1);
      } else if (r == size - 1) {
        const Mat ker = null_space(m, 1e-9);
        if (ker.cols() == 1) {
          Vec c = ker.col(0);
          if (c.cwiseAbs().minCoeff() > 1e-8 * c.cwiseAbs().maxCoeff()) {
            c /= c(0);
            out.push_back({chosen, c});
          }
        }
      }
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Mat diagonalizing_basis(const SpectrahedralCone& k, const SymMatrix& x) {
  const Decomposition d = carath_decompose(k, x);
  const int n = k.n();
  Mat p(n, n);
  const int r = static_cast<int>(d.atoms.size());
  Mat scaled(n, r);
  for (int i = 0; i < r; ++i) {
    scaled.col(i) = std::sqrt(d.atoms[i].weight) * d.atoms[i].vector;
  }
  p.leftCols(r) = scaled;
  if (r < n) {
    const Mat comp = r > 0 ? null_space(scaled.transpose(), 1e-10) : Mat(Mat::Identity(n, n));
    p.rightCols(n - r) = comp.leftCols(n - r);
  }
  return p;
}

Mat tangent_space(const SpectrahedralCone& k, const Vec& x) {
  const int n = k.n();
  if (k.complement_svec().cols() == 0) return Mat::Identity(n, n);
  Mat t(k.complement_svec().cols(), n);
  for (int j = 0; j < n; ++j) {
    Mat e = Mat::Zero(n, n);
    e.col(j) += x;
    e.row(j) += x.transpose();
    t.col(j) = k.complement_svec().transpose() * svec(e);
  }
  // t is linear in x with orthonormal constraints, so scale by |x|.
  Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > 1e-9 * x.norm()) ++r;
  return svd.matrixV().rightCols(n - r);
}

bool has_tangent(const SpectrahedralCone& k, const Vec& x) {
  const Mat t = tangent_space(k, x);
  const Vec xn = x.normalized();
  const Mat rest = t - xn * (xn.transpose() * t);
  return matrix_rank(rest, 1e-8) >= 1 && rest.norm() > 1e-8;
}

ConePtr congruence(const ConePtr& k, const Mat& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != k->n()) {
    throw Error(ErrorKind::kInvalidInput, "congruence: matrix has wrong column count");
  }
  Mat span(svec_size(n), k->dim());
  for (int c = 0; c < k->dim(); ++c) {
    span.col(c) = svec(a * smat(k->span_svec().col(c), k->n()) * a.transpose());
  }
  std::vector<Vec> gens;
  for (const Vec& x : k->generators()) gens.push_back(a * x);
  return std::make_shared<SpectrahedralCone>(n, span, std::move(gens),
                                             ConeExpr::congruence(k->expr(), a),
                                             std::vector<ConePtr>{k});
}

}  // namespace rog
