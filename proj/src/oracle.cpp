#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rog/constructions.hpp"
#include "rog/decompose.hpp"
#include "rog/error.hpp"

namespace rog {

namespace {

using Opt = std::optional<Vec>;

Vec random_unit(int d, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vec a(d);
  for (int i = 0; i < d; ++i) a(i) = gauss(rng);
  return a.normalized();
}

// Picks one candidate: the first one, or a random one with rng.
Opt pick(const std::vector<Vec>& cands, Rng* rng) {
  if (cands.empty()) return std::nullopt;
  if (rng == nullptr) return cands.front();
  std::uniform_int_distribution<size_t> u(0, cands.size() - 1);
  return cands[u(*rng)];
}

Opt finish(const SpectrahedralCone& k, const Mat& h, Opt x) {
  if (!x) return x;
  Vec y = h * (h.transpose() * *x);
  const double ny = y.norm();
  if (!(ny > 1e-12) || !k.contains_ray(y / ny, 1e-7)) return std::nullopt;
  return Vec(y / ny);
}

Opt ray_full(const Mat& h, Rng* rng) {
  if (h.cols() == 0) return std::nullopt;
  if (rng == nullptr) return Vec(h.col(0));
  return Vec(h * random_unit(static_cast<int>(h.cols()), *rng));
}

Opt ray_diagonal(int n, const Mat& h, Rng* rng) {
  std::vector<Vec> cands;
  const FaceHandle fh{h};
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    if (fh.contains(e, 1e-8)) cands.push_back(e);
  }
  return pick(cands, rng);
}

// Vectors (v, t v, ..., t^{b-1} v) or (0, ..., 0, v) inside span(h).
Opt ray_hankel(int blocks, int m, const Mat& h, Rng* rng) {
  const int d = static_cast<int>(h.cols());
  if (d == 0) return std::nullopt;
  if (blocks == 1) return ray_full(h, rng);
  const int rows = (blocks - 1) * m;
  const Mat up = h.topRows(rows);
  const Mat down = h.bottomRows(rows);
  const Mat tail = null_space(up, 1e-9);
  if (tail.cols() > 0) return ray_full(Mat(h * tail), rng);
  const Mat mm = up.completeOrthogonalDecomposition().solve(down);
  Eigen::EigenSolver<Mat> es(mm);
  const double scale = 1.0 + mm.norm();
  std::vector<Vec> cands;
  for (int i = 0; i < d; ++i) {
    const auto lam = es.eigenvalues()(i);
    if (std::abs(lam.imag()) > 1e-8 * scale) continue;
    const double t = lam.real();
    // Whole real eigenspace of the pencil (down - t up).
    const Mat ker = null_space(Mat(down - t * up), 1e-7);
    if (ker.cols() == 0) continue;
    Vec a = rng != nullptr ? Vec(ker * random_unit(static_cast<int>(ker.cols()), *rng))
                           : Vec(ker.col(0));
    cands.push_back(h * a);
  }
  return pick(cands, rng);
}

Opt ray_codim1(const Mat& q, const Mat& h, Rng* rng) {
  if (h.cols() == 0) return std::nullopt;
  const Mat qh = h.transpose() * q * h;
  const EigDecomp e = eig_sym(SymMatrix(qh));
  const double top = std::max(1e-300, e.values.cwiseAbs().maxCoeff());
  std::vector<int> pos;
  std::vector<int> neg;
  std::vector<int> ker;
  for (int i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > 1e-9 * top) {
      pos.push_back(i);
    } else if (e.values(i) < -1e-9 * top) {
      neg.push_back(i);
    } else {
      ker.push_back(i);
    }
  }
  if (qh.norm() < 1e-12) return ray_full(h, rng);
  auto combo = [&](const std::vector<int>& idx, bool scaled) {
    Vec v = Vec::Zero(qh.rows());
    if (rng == nullptr) {
      v = e.vectors.col(idx.front());
    } else {
      const Vec c = random_unit(static_cast<int>(idx.size()), *rng);
      for (size_t j = 0; j < idx.size(); ++j) v += c(j) * e.vectors.col(idx[j]);
    }
    if (scaled) {
      const double val = std::abs(v.dot(qh * v));
      v /= std::sqrt(val);
    }
    return v;
  };
  if (pos.empty() || neg.empty()) {
    if (ker.empty()) return std::nullopt;
    return Vec(h * combo(ker, false));
  }
  Vec a = combo(pos, true) + combo(neg, true);
  if (rng != nullptr && !ker.empty()) {
    std::normal_distribution<double> gauss;
    a += gauss(*rng) * combo(ker, false);
  }
  return Vec(h * a);
}

// Least-squares search for a with (Ua)^T G_j (Ua) = 0 on the unit sphere.
Opt ray_generic(const SpectrahedralCone& k, const Mat& h, Rng* rng) {
  const int d = static_cast<int>(h.cols());
  if (d == 0) return std::nullopt;
  std::vector<Vec> cands;
  const FaceHandle fh{h};
  for (const Vec& g : k.generators()) {
    if (fh.contains(g, 1e-8)) cands.push_back(g);
  }
  if (!cands.empty()) {
    if (rng == nullptr || cands.size() == 1) return cands.front();
  }
  std::vector<Mat> gs;
  for (const SymMatrix& c : k.constraint_basis()) {
    const Mat g = h.transpose() * c.mat() * h;
    if (g.norm() > 1e-13) gs.push_back(g);
  }
  if (gs.empty()) return ray_full(h, rng);
  Rng local(0x04ac1e5eedULL ^ static_cast<unsigned long long>(d));
  Rng& r = rng != nullptr ? *rng : local;
  const int nc = static_cast<int>(gs.size());
  for (int start = 0; start < 60; ++start) {
    Vec a = random_unit(d, r);
    double lambda = 1e-3;
    double f = 0.0;
    for (int it = 0; it < 200; ++it) {
      Vec res(nc);
      Mat jac(nc, d);
      for (int j = 0; j < nc; ++j) {
        const Vec ga = gs[j] * a;
        res(j) = a.dot(ga);
        jac.row(j) = 2.0 * ga.transpose();
      }
      f = res.squaredNorm();
      if (f < 1e-26) break;
      // Tangent step keeps |a| = 1 to first order.
      const Mat proj = Mat::Identity(d, d) - a * a.transpose();
      const Mat jt = jac * proj;
      const Mat lhs = jt.transpose() * jt + lambda * Mat::Identity(d, d);
      const Vec step = -lhs.ldlt().solve(jt.transpose() * res);
      const Vec trial = (a + step).normalized();
      double ft = 0.0;
      for (int j = 0; j < nc; ++j) ft += std::pow(trial.dot(gs[j] * trial), 2);
      if (ft < f) {
        a = trial;
        lambda = std::max(1e-12, lambda * 0.3);
      } else {
        lambda *= 10.0;
        if (lambda > 1e8) break;
      }
    }
    if (f < 1e-22) {
      const Vec x = h * a;
      if (k.contains_ray(x, 1e-9)) return x;
    }
  }
  return pick(cands, rng);
}

Opt find_ray_impl(const SpectrahedralCone& k, const Mat& h, Rng* rng);

// Rays of a child cone of size `m` mapped into the parent by `f` (n x m,
// injective); the child search runs on the preimage of H.
Opt ray_through_map(const SpectrahedralCone& child, const Mat& f, const Mat& h, Rng* rng) {
  const Mat hit = intersect(f, h, 1e-9);
  if (hit.cols() == 0) return std::nullopt;
  const Mat pre = orth(f.completeOrthogonalDecomposition().solve(hit), 1e-10);
  if (pre.cols() == 0) return std::nullopt;
  Opt y = find_ray_impl(child, pre, rng);
  if (!y) return std::nullopt;
  return Vec(f * *y);
}

Opt ray_structured(const SpectrahedralCone& k, const Mat& h, Rng* rng) {
  const ExprPtr& e = k.expr();
  if (!e) return std::nullopt;
  const auto& parts = k.parts();
  const int n = k.n();
  switch (e->kind) {
    case ExprKind::kFullPsd: return ray_full(h, rng);
    case ExprKind::kDiagonal: return ray_diagonal(n, h, rng);
    case ExprKind::kHankel: return ray_hankel(e->blocks, e->m, h, rng);
    case ExprKind::kCodim1: return ray_codim1(e->matrix, h, rng);
    case ExprKind::kTridiag:
    case ExprKind::kChordal:
    case ExprKind::kCrossRatio:
      if (parts.size() == 1) return find_ray_impl(*parts[0], h, rng);
      return std::nullopt;
    case ExprKind::kFace: {
      if (parts.size() != 1) return std::nullopt;
      const Mat inside = intersect(h, e->matrix, 1e-9);
      if (inside.cols() == 0) return std::nullopt;
      return find_ray_impl(*parts[0], inside, rng);
    }
    case ExprKind::kCongruence: {
      if (parts.size() != 1) return std::nullopt;
      const Mat& a = e->matrix;
      const Mat outside = Mat::Identity(n, n) - h * h.transpose();
      Mat pre = null_space(Mat(outside * a), 1e-9);
      if (pre.cols() == 0) return std::nullopt;
      // Drop the kernel of A: child rays there map to zero.
      pre = intersect(pre, orth(a.transpose(), 1e-10), 1e-9);
      if (pre.cols() == 0) return std::nullopt;
      Opt y = find_ray_impl(*parts[0], pre, rng);
      if (!y) return std::nullopt;
      return Vec(a * *y);
    }
    case ExprKind::kDirectSum: {
      std::vector<Vec> cands;
      int offset = 0;
      for (const ConePtr& p : parts) {
        Mat block = Mat::Zero(n, p->n());
        block.middleRows(offset, p->n()) = Mat::Identity(p->n(), p->n());
        if (Opt x = ray_through_map(*p, block, h, rng)) cands.push_back(*x);
        if (!cands.empty() && rng == nullptr) break;
        offset += p->n();
      }
      return pick(cands, rng);
    }
    case ExprKind::kFullExtension: {
      if (parts.size() != 1) return std::nullopt;
      const int n1 = parts[0]->n();
      const Mat tails = null_space(h.topRows(n1), 1e-9);
      if (tails.cols() > 0 && (rng == nullptr || h.topRows(n1).norm() < 1e-12)) {
        return ray_full(Mat(h * tails), rng);
      }
      const Mat top = orth(h.topRows(n1), 1e-10);
      if (top.cols() == 0) return std::nullopt;
      Opt v = find_ray_impl(*parts[0], top, rng);
      if (!v) {
        if (tails.cols() > 0) return ray_full(Mat(h * tails), rng);
        return std::nullopt;
      }
      // Any lift inside H works: the tail block of L is unconstrained.
      const Vec a = h.topRows(n1).completeOrthogonalDecomposition().solve(*v);
      return Vec(h * a);
    }
    case ExprKind::kIntertwining: {
      if (parts.size() != 2) return std::nullopt;
      std::vector<Vec> cands;
      if (Opt x = ray_through_map(*parts[0], e->glue.f1, h, rng)) cands.push_back(*x);
      if (cands.empty() || rng != nullptr) {
        if (Opt x = ray_through_map(*parts[1], e->glue.f2, h, rng)) cands.push_back(*x);
      }
      return pick(cands, rng);
    }
    case ExprKind::kTernaryQuartic:
    case ExprKind::kMomentCone:
    case ExprKind::kBlockToeplitz:
      return std::nullopt;
  }
  return std::nullopt;
}

bool has_closed_form(const SpectrahedralCone& k) {
  if (!k.expr()) return false;
  switch (k.expr()->kind) {
    case ExprKind::kTernaryQuartic:
    case ExprKind::kMomentCone:
    case ExprKind::kBlockToeplitz:
      return false;
    default:
      return true;
  }
}

Opt find_ray_impl(const SpectrahedralCone& k, const Mat& h_in, Rng* rng) {
  if (h_in.rows() != k.n()) {
    throw Error(ErrorKind::kInvalidInput, "find_ray: subspace has wrong ambient size");
  }
  const Mat h = orth(h_in, 1e-10);
  if (h.cols() == 0) return std::nullopt;
  if (has_closed_form(k)) {
    if (Opt x = finish(k, h, ray_structured(k, h, rng))) return x;
  }
  return finish(k, h, ray_generic(k, h, rng));
}

}  // namespace

std::optional<Vec> find_ray(const SpectrahedralCone& k, const Mat& h, Rng* rng) {
  return find_ray_impl(k, h, rng);
}

Vec extreme_ray_oracle(const SpectrahedralCone& k, const FaceHandle& h, Rng* rng) {
  if (auto x = find_ray(k, h.image_basis, rng)) return *x;
  throw Error(ErrorKind::kNoRay, "extreme_ray_oracle: no rank-1 element found in the face");
}

}  // namespace rog
