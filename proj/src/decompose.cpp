#include "rog/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rog/constructions.hpp"
#include "rog/error.hpp"

namespace rog {

Mat Decomposition::sum(int n) const {
  Mat s = Mat::Zero(n, n);
  for (const RankOneAtom& a : atoms) s += a.weight * a.vector * a.vector.transpose();
  return s;
}

CMat ComplexDecomposition::sum(int n) const {
  CMat s = CMat::Zero(n, n);
  for (const ComplexAtom& a : atoms) s += a.weight * a.vector * a.vector.adjoint();
  return s;
}

namespace {

void push_atom(Decomposition& d, const Vec& x, double weight) {
  const double nx = x.norm();
  if (!(nx > 0.0) || weight * nx * nx <= 0.0) return;
  d.atoms.push_back({weight * nx * nx, x / nx});
}

Decomposition finalize(Decomposition d, const Mat& x) {
  d.residual = (x - d.sum(static_cast<int>(x.rows()))).norm();
  return d;
}

void require_member(const SpectrahedralCone& k, const SymMatrix& x, const char* op) {
  if (x.n() != k.n()) {
    throw Error(ErrorKind::kInvalidInput, std::string(op) + ": dimension mismatch");
  }
  if (!membership(k, x, 1e-6)) {
    throw Error(ErrorKind::kInvalidInput, std::string(op) + ": matrix is not in the cone");
  }
}

Mat orth_complement(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() == 0) return Mat::Identity(n, n);
  return null_space(a.transpose(), 1e-10);
}

Decomposition eigen_atoms(const SymMatrix& x) {
  Decomposition d;
  const EigDecomp e = eig_sym(x);
  const int r = numeric_rank(x);
  for (int i = 0; i < r; ++i) push_atom(d, e.vectors.col(i), e.values(i));
  return finalize(std::move(d), x.mat());
}

}  // namespace

Decomposition carath_decompose(const SpectrahedralCone& k, const SymMatrix& x, double tol) {
  require_member(k, x, "carath_decompose");
  const EigDecomp e0 = eig_sym(x);
  const int r0 = numeric_rank(x, tol);
  Mat u = e0.vectors.leftCols(r0);
  Mat c = e0.values.head(r0).asDiagonal();
  Decomposition d;
  Rng rng(0xca7a'7e0d'0001ULL);
  std::vector<double> trace;
  for (int r = r0; r > 0; --r) {
    bool stepped = false;
    for (int attempt = 0; attempt < 8 && !stepped; ++attempt) {
      const auto ray = find_ray(k, u, attempt == 0 ? nullptr : &rng);
      if (!ray) continue;
      const Vec a = u.transpose() * *ray;
      if (a.norm() < 0.5) continue;
      const Vec ca = c.ldlt().solve(a);
      const double mu = 1.0 / a.dot(ca);
      trace.push_back(mu);
      if (!(mu > 0.0) || !std::isfinite(mu)) continue;
      const Mat rest = c - mu * a * a.transpose();
      const EigDecomp er = eig_sym(SymMatrix(rest));
      const double top = std::max(1.0, er.values.cwiseAbs().maxCoeff());
      if (std::abs(er.values(r - 1)) > 1e-6 * top) continue;
      if (r > 1 && er.values(r - 2) <= 1e-12 * top) continue;
      push_atom(d, u * a, mu);
      u = u * er.vectors.leftCols(r - 1);
      c = er.values.head(r - 1).asDiagonal();
      stepped = true;
    }
    if (!stepped) {
      std::ostringstream msg;
      msg << "carath_decompose: line search failed at rank " << r << "; mu trace:";
      for (double m : trace) msg << ' ' << m;
      throw Error(ErrorKind::kNumericalFailure, msg.str());
    }
  }
  return finalize(std::move(d), x.mat());
}

Decomposition decompose_full_extension(const SpectrahedralCone& k, const SymMatrix& x) {
  if (!k.expr() || k.expr()->kind != ExprKind::kFullExtension || k.parts().size() != 1) {
    throw Error(ErrorKind::kInvalidInput, "decompose_full_extension: cone is not a full extension");
  }
  require_member(k, x, "decompose_full_extension");
  const SpectrahedralCone& child = *k.parts()[0];
  const int n1 = child.n();
  const int t = k.n() - n1;
  const Mat& xm = x.mat();
  const Mat x11 = child.project_to_span(xm.topLeftCorner(n1, n1));
  const Decomposition dc = decompose_by_expr(child, SymMatrix(x11));
  const int r = static_cast<int>(dc.atoms.size());
  Mat v(n1, r);
  for (int i = 0; i < r; ++i) v.col(i) = std::sqrt(dc.atoms[i].weight) * dc.atoms[i].vector;
  // W^T = V^+ X12.
  const Mat wt = r > 0 ? Mat(v.completeOrthogonalDecomposition().solve(xm.topRightCorner(n1, t)))
                       : Mat(Mat::Zero(0, t));
  Decomposition d;
  for (int i = 0; i < r; ++i) {
    Vec y(k.n());
    y << v.col(i), wt.row(i).transpose();
    push_atom(d, y, 1.0);
  }
  const Mat schur = xm.bottomRightCorner(t, t) - wt.transpose() * wt;
  const Decomposition tail = eigen_atoms(SymMatrix(schur));
  for (const RankOneAtom& a : tail.atoms) {
    Vec y = Vec::Zero(k.n());
    y.tail(t) = a.vector;
    push_atom(d, y, a.weight);
  }
  return finalize(std::move(d), xm);
}

Decomposition decompose_intertwining(const SpectrahedralCone& k, const SymMatrix& x) {
  if (!k.expr() || k.expr()->kind != ExprKind::kIntertwining || k.parts().size() != 2) {
    throw Error(ErrorKind::kInvalidInput, "decompose_intertwining: cone is not an intertwining");
  }
  require_member(k, x, "decompose_intertwining");
  const GlueSpec& g = k.expr()->glue;
  const SpectrahedralCone& k1 = *k.parts()[0];
  const SpectrahedralCone& k2 = *k.parts()[1];
  const int n1 = k1.n();
  const int n2 = k2.n();
  const int kk = g.rank();
  const int n = k.n();
  const Mat c1 = orth_complement(g.iota1);
  const Mat c2 = orth_complement(g.iota2);
  Mat b1(n1, n1);
  b1 << c1, g.iota1;
  Mat b2(n2, n2);
  b2 << g.iota2, c2;
  Mat gm(n, n);
  gm << g.f1 * b1, g.f2 * c2;
  const auto lu = gm.fullPivLu();
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kNumericalFailure, "decompose_intertwining: singular coordinate change");
  }
  const Mat gi = lu.inverse();
  const SymMatrix xp(Mat(gi * x.mat() * gi.transpose()));
  const double scale = 1.0 + xp.mat().norm();
  if (n1 > kk && n2 > kk &&
      xp.mat().topRightCorner(n1 - kk, n2 - kk).norm() > 1e-6 * scale) {
    throw Error(ErrorKind::kNumericalFailure, "decompose_intertwining: corner block is not zero");
  }
  Mat clean = xp.mat();
  if (n1 > kk && n2 > kk) {
    clean.topRightCorner(n1 - kk, n2 - kk).setZero();
    clean.bottomLeftCorner(n2 - kk, n1 - kk).setZero();
  }
  const auto [s1, s2] = schur_split(SymMatrix(clean), {n1 - kk, kk, n2 - kk}, 1e-6);
  Mat x1 = clean.topLeftCorner(n1, n1);
  x1.bottomRightCorner(kk, kk) = s1.mat();
  Mat x2 = clean.bottomRightCorner(n2, n2);
  x2.topLeftCorner(kk, kk) = s2.mat();
  Decomposition d;
  auto run = [&](const SpectrahedralCone& child, const Mat& basis, const Mat& xpart,
                 const Mat& f) {
    const Mat y = child.project_to_span(basis * xpart * basis.transpose());
    if (numeric_rank(SymMatrix(y), 1e-10) == 0) return;
    for (const RankOneAtom& a : decompose_by_expr(child, SymMatrix(y)).atoms) {
      push_atom(d, f * a.vector, a.weight);
    }
  };
  run(k1, b1, x1, g.f1);
  run(k2, b2, x2, g.f2);
  return finalize(std::move(d), x.mat());
}

Decomposition decompose_by_expr(const SpectrahedralCone& k, const SymMatrix& x) {
  const ExprPtr& e = k.expr();
  if (!e) return carath_decompose(k, x);
  const auto& parts = k.parts();
  const bool combinator = e->kind == ExprKind::kDirectSum ||
                          e->kind == ExprKind::kFullExtension ||
                          e->kind == ExprKind::kIntertwining ||
                          e->kind == ExprKind::kCongruence || e->kind == ExprKind::kFace ||
                          e->kind == ExprKind::kChordal || e->kind == ExprKind::kTridiag ||
                          e->kind == ExprKind::kCrossRatio;
  if (combinator && parts.empty()) {
    // Provenance without built children, e.g. a cone read from JSON.
    const ConePtr rebuilt = build(e);
    if (rebuilt->n() == k.n()) return decompose_by_expr(*rebuilt, x);
    return carath_decompose(k, x);
  }
  switch (e->kind) {
    case ExprKind::kFullPsd:
      require_member(k, x, "decompose");
      return eigen_atoms(x);
    case ExprKind::kHankel:
      require_member(k, x, "decompose");
      return decompose_hankel(x, e->blocks, e->m);
    case ExprKind::kFullExtension: return decompose_full_extension(k, x);
    case ExprKind::kIntertwining: return decompose_intertwining(k, x);
    case ExprKind::kTridiag:
    case ExprKind::kChordal:
    case ExprKind::kCrossRatio:
    case ExprKind::kFace: {
      require_member(k, x, "decompose");
      Decomposition d = decompose_by_expr(*parts[0], x);
      return finalize(std::move(d), x.mat());
    }
    case ExprKind::kCongruence: {
      require_member(k, x, "decompose");
      const Mat& a = e->matrix;
      const Mat ap = a.completeOrthogonalDecomposition().pseudoInverse();
      const SpectrahedralCone& child = *parts[0];
      const Mat y = child.project_to_span(ap * x.mat() * ap.transpose());
      Decomposition d;
      for (const RankOneAtom& at : decompose_by_expr(child, SymMatrix(y)).atoms) {
        push_atom(d, a * at.vector, at.weight);
      }
      return finalize(std::move(d), x.mat());
    }
    case ExprKind::kDirectSum: {
      require_member(k, x, "decompose");
      Decomposition d;
      int offset = 0;
      for (const ConePtr& p : parts) {
        const int m = p->n();
        const Mat blk = p->project_to_span(x.mat().block(offset, offset, m, m));
        if (numeric_rank(SymMatrix(blk)) > 0) {
          for (const RankOneAtom& at : decompose_by_expr(*p, SymMatrix(blk)).atoms) {
            Vec y = Vec::Zero(k.n());
            y.segment(offset, m) = at.vector;
            push_atom(d, y, at.weight);
          }
        }
        offset += m;
      }
      return finalize(std::move(d), x.mat());
    }
    default:
      return carath_decompose(k, x);
  }
}

Decomposition decompose_hankel(const SymMatrix& x, int blocks, int m) {
  const int n = blocks * m;
  if (x.n() != n) throw Error(ErrorKind::kInvalidInput, "decompose_hankel: size mismatch");
  const ConePtr cone = hankel_cone(blocks, m);
  if (!membership(*cone, x, 1e-6)) {
    throw Error(ErrorKind::kInvalidInput, "decompose_hankel: matrix is not PSD block-Hankel");
  }
  if (blocks == 1) return eigen_atoms(x);
  const int r = numeric_rank(x);
  if (r == 0) return finalize(Decomposition{}, x.mat());
  const EigDecomp e = eig_sym(x);
  const Mat u = e.vectors.leftCols(r);
  const Vec lam = e.values.head(r);
  const int rows = (blocks - 1) * m;
  const Mat up = u.topRows(rows);
  const Mat down = u.bottomRows(rows);

  auto prony = [&]() -> std::optional<Decomposition> {
    if (rows < r || matrix_rank(up, 1e-8) < r) return std::nullopt;
    const Mat mm = up.colPivHouseholderQr().solve(down);
    if ((up * mm - down).norm() > 1e-7 * (1.0 + down.norm())) return std::nullopt;
    Eigen::EigenSolver<Mat> es(mm);
    const double scale = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
    Vec t(r);
    for (int i = 0; i < r; ++i) {
      if (std::abs(es.eigenvalues()(i).imag()) > 1e-8 * scale) return std::nullopt;
      t(i) = es.eigenvalues()(i).real();
    }
    // Group nodes closer than the relative clustering tolerance.
    std::vector<int> order(r);
    for (int i = 0; i < r; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return t(a) < t(b); });
    std::vector<std::vector<int>> clusters;
    for (int i : order) {
      if (!clusters.empty() &&
          std::abs(t(i) - t(clusters.back().back())) <= 1e-6 * std::max(1.0, std::abs(t(i)))) {
        clusters.back().push_back(i);
      } else {
        clusters.push_back({i});
      }
    }
    Mat a(r, 0);
    for (const auto& cl : clusters) {
      double tc = 0.0;
      for (int i : cl) tc += t(i);
      tc /= static_cast<double>(cl.size());
      const Mat ker = null_space(Mat(mm - tc * Mat::Identity(r, r)), 1e-6);
      if (ker.cols() != static_cast<int>(cl.size())) return std::nullopt;
      a.conservativeResize(r, a.cols() + ker.cols());
      a.rightCols(ker.cols()) = ker;
    }
    const auto lu = a.fullPivLu();
    if (!lu.isInvertible()) return std::nullopt;
    const Mat ai = lu.inverse();
    const Mat core = ai * lam.asDiagonal() * ai.transpose();
    Decomposition d;
    int offset = 0;
    for (const auto& cl : clusters) {
      const int s = static_cast<int>(cl.size());
      const Mat blk = core.block(offset, offset, s, s);
      const Mat off = core.block(offset, 0, s, r);
      if (std::sqrt(std::max(0.0, off.squaredNorm() - blk.squaredNorm())) > 1e-7 * (1.0 + core.norm())) {
        return std::nullopt;
      }
      const EigDecomp eb = eig_sym(SymMatrix(blk));
      if (eb.values(s - 1) < -1e-8 * (1.0 + core.norm())) return std::nullopt;
      for (int j = 0; j < s; ++j) {
        if (eb.values(j) <= 0.0) continue;
        push_atom(d, u * a.middleCols(offset, s) * eb.vectors.col(j), eb.values(j));
      }
      offset += s;
    }
    d = finalize(std::move(d), x.mat());
    if (static_cast<int>(d.atoms.size()) != r || d.residual > 1e-7 * (1.0 + x.mat().norm())) {
      return std::nullopt;
    }
    for (const RankOneAtom& at : d.atoms) {
      if (!cone->contains_ray(at.vector, 1e-7)) return std::nullopt;
    }
    return d;
  };
  if (auto d = prony()) return *d;
  return carath_decompose(*cone, x);
}

ComplexDecomposition decompose_block_toeplitz(const HermMatrix& t, int blocks, int m) {
  const int n = blocks * m;
  if (t.n() != n) throw Error(ErrorKind::kInvalidInput, "decompose_block_toeplitz: size mismatch");
  const CMat& tm = t.mat();
  const double scale = 1.0 + tm.norm();
  for (int i = 1; i < blocks; ++i) {
    for (int j = 1; j < blocks; ++j) {
      const CMat diff = tm.block(i * m, j * m, m, m) - tm.block((i - 1) * m, (j - 1) * m, m, m);
      if (diff.norm() > 1e-8 * scale) {
        throw Error(ErrorKind::kInvalidInput, "decompose_block_toeplitz: matrix is not block-Toeplitz");
      }
    }
  }
  if (!psd_check(t, 1e-8)) {
    throw Error(ErrorKind::kInvalidInput, "decompose_block_toeplitz: matrix is not PSD");
  }
  ComplexDecomposition d;
  const int r = numeric_rank(t);
  if (r == 0) return d;
  const HermEigDecomp e = eig_herm(t);
  CMat w = e.vectors.leftCols(r);
  for (int i = 0; i < r; ++i) w.col(i) *= std::sqrt(std::max(0.0, e.values(i)));
  auto emit = [&](const CVec& x) {
    const double nx = x.norm();
    if (nx > 0.0) d.atoms.push_back({nx * nx, x / nx});
  };
  if (blocks == 1) {
    for (int i = 0; i < r; ++i) emit(w.col(i));
  } else {
    const int rows = (blocks - 1) * m;
    const CMat wu = w.topRows(rows);
    const CMat wl = w.bottomRows(rows);
    // Procrustes: unitary U minimizing |W_u U - W_l|.
    Eigen::JacobiSVD<CMat> svd(wu.adjoint() * wl, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMat uni = svd.matrixU() * svd.matrixV().adjoint();
    const double res = (wu * uni - wl).norm();
    if (res > 1e-6 * scale) {
      throw Error(ErrorKind::kNumericalFailure,
                  "decompose_block_toeplitz: shift map is not unitary (residual " +
                      std::to_string(res) + ")");
    }
    Eigen::ComplexSchur<CMat> schur(uni);
    const CMat wv = w * schur.matrixU();
    for (int i = 0; i < r; ++i) emit(wv.col(i));
  }
  d.residual = (tm - d.sum(n)).norm();
  return d;
}

}  // namespace rog
