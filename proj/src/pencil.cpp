#include "rog/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>

#include "rog/error.hpp"

namespace rog {

namespace {

double wrap_pi(double a) {
  double r = std::fmod(a, std::numbers::pi);
  if (r < 0) r += std::numbers::pi;
  if (r >= std::numbers::pi - 1e-15) r = 0.0;
  return r;
}

double angle_gap(double a, double b) {
  const double d = std::abs(wrap_pi(a - b));
  return std::min(d, std::numbers::pi - d);
}

}  // namespace

PencilDecomposition pencil_decompose(const SymMatrix& q1s, const SymMatrix& q2s, Rng* rng) {
  const int n = q1s.n();
  if (q2s.n() != n) throw Error(ErrorKind::kInvalidInput, "pencil_decompose: size mismatch");
  const Mat& q1 = q1s.mat();
  const Mat& q2 = q2s.mat();
  const double scale = std::max(q1.norm(), q2.norm());
  PencilDecomposition out;
  Mat both(2 * n, n);
  both << q1, q2;
  out.h0 = null_space(both, 1e-10);
  const int d0 = static_cast<int>(out.h0.cols());
  if (d0 == n) return out;
  const Mat c = d0 == 0 ? Mat(Mat::Identity(n, n)) : null_space(out.h0.transpose(), 1e-10);
  const int r = static_cast<int>(c.cols());
  const Mat a = c.transpose() * q1 * c;
  const Mat b = c.transpose() * q2 * c;

  Rng local(0x9e3779b97f4a7c15ULL);
  Rng& g = rng != nullptr ? *rng : local;
  std::uniform_real_distribution<double> unif(0.0, std::numbers::pi);
  std::vector<std::pair<double, double>> members;  // (conditioning, theta)
  for (int attempt = 0; attempt < 20; ++attempt) {
    const double theta = rng == nullptr ? 0.61803398875 + attempt * std::numbers::pi / 20 : unif(g);
    Eigen::JacobiSVD<Mat> svd(Mat(std::cos(theta) * a + std::sin(theta) * b));
    const Vec s = svd.singularValues();
    members.emplace_back(s(0) > 0.0 ? s(r - 1) / s(0) : 0.0, theta);
  }
  std::sort(members.begin(), members.end(), std::greater<>());
  if (members.front().first <= 1e-8) {
    throw Error(ErrorKind::kNotStructured, "pencil_decompose: no regular member of the pencil found");
  }

  // Eigenspaces of M = P^{-1} Q1 for P = cos(theta) Q1 + sin(theta) Q2.
  auto eigenspaces = [&](const Mat& m) -> std::optional<std::vector<Mat>> {
    Eigen::EigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) return std::nullopt;
    // Grouped by real part: a repeated eigenvalue may come back as a split
    // complex pair. The kernel check rejects genuinely complex ones.
    std::vector<double> mu(r);
    for (int i = 0; i < r; ++i) mu[i] = es.eigenvalues()(i).real();
    std::sort(mu.begin(), mu.end());
    std::vector<std::vector<double>> groups;
    for (double v : mu) {
      if (!groups.empty() && std::abs(v - groups.back().back()) <= 1e-6 * std::max(1.0, std::abs(v))) {
        groups.back().push_back(v);
      } else {
        groups.push_back({v});
      }
    }
    std::vector<Mat> spaces;
    for (const auto& grp : groups) {
      double mean = 0.0;
      for (double v : grp) mean += v;
      mean /= static_cast<double>(grp.size());
      // Whole eigenspace; the cut is relative to M since M - mean I may be
      // pure rounding noise.
      Eigen::JacobiSVD<Mat> svd(Mat(m - mean * Mat::Identity(r, r)), Eigen::ComputeFullV);
      const double cut = 1e-7 * (m.norm() + std::abs(mean));
      const int rank = static_cast<int>((svd.singularValues().array() > cut).count());
      if (r - rank != static_cast<int>(grp.size())) return std::nullopt;
      spaces.push_back(svd.matrixV().rightCols(r - rank));
    }
    return spaces;
  };
  std::optional<std::vector<Mat>> spaces;
  for (size_t i = 0; i < 5 && i < members.size() && !spaces; ++i) {
    if (members[i].first <= 1e-8) break;
    const double theta = members[i].second;
    spaces = eigenspaces(
        Mat((std::cos(theta) * a + std::sin(theta) * b).partialPivLu().solve(a)));
  }
  if (!spaces) {
    throw Error(ErrorKind::kNotStructured,
                "pencil_decompose: no real eigenbasis (complex or defective eigenvalue)");
  }
  Mat full(n, 0);
  if (d0 > 0) full = out.h0;
  for (const Mat& ker : *spaces) {
    PencilBlock blk;
    blk.basis = orth(c * ker, 1e-12);
    const Vec y = blk.basis.col(0);
    const Vec f1 = q1 * y;
    const Vec f2 = q2 * y;
    const Vec w = f1.norm() >= f2.norm() ? f1 : f2;
    blk.angle = wrap_pi(std::atan2(f2.dot(w), f1.dot(w)));
    blk.phi = blk.basis.transpose() *
              (std::cos(blk.angle) * q1 + std::sin(blk.angle) * q2) * blk.basis;
    blk.phi = 0.5 * (blk.phi + blk.phi.transpose());
    out.blocks.push_back(std::move(blk));
    full.conservativeResize(n, full.cols() + out.blocks.back().basis.cols());
    full.rightCols(out.blocks.back().basis.cols()) = out.blocks.back().basis;
  }
  if (matrix_rank(full, 1e-9) != n) {
    throw Error(ErrorKind::kNotStructured, "pencil_decompose: eigenvectors do not span R^n");
  }
  for (size_t i = 0; i < out.blocks.size(); ++i) {
    for (size_t j = i + 1; j < out.blocks.size(); ++j) {
      if (angle_gap(out.blocks[i].angle, out.blocks[j].angle) <= 1e-7) {
        throw Error(ErrorKind::kNotStructured, "pencil_decompose: coincident block angles");
      }
    }
  }
  // Reconstruction in block coordinates.
  Mat e1 = Mat::Zero(n, n);
  Mat e2 = Mat::Zero(n, n);
  int off = d0;
  for (const PencilBlock& blk : out.blocks) {
    const int d = static_cast<int>(blk.basis.cols());
    e1.block(off, off, d, d) = std::cos(blk.angle) * blk.phi;
    e2.block(off, off, d, d) = std::sin(blk.angle) * blk.phi;
    off += d;
  }
  out.error = std::max((full.transpose() * q1 * full - e1).norm(),
                       (full.transpose() * q2 * full - e2).norm()) /
              std::max(1.0, scale);
  return out;
}

Mat rank2_matrix(const std::vector<SymMatrix>& qs, const Vec& x, const Vec& y) {
  Mat m(static_cast<int>(qs.size()), 3);
  for (size_t i = 0; i < qs.size(); ++i) {
    const Mat& q = qs[i].mat();
    m.row(static_cast<int>(i)) << x.dot(q * x), 2.0 * x.dot(q * y), y.dot(q * y);
  }
  return m;
}

std::optional<SymMatrix> rank2_extreme_check(const std::vector<SymMatrix>& qs, const Vec& x,
                                             const Vec& y) {
  if (qs.empty()) return std::nullopt;
  Mat xy(x.size(), 2);
  xy << x, y;
  if (matrix_rank(xy, 1e-10) < 2) return std::nullopt;
  const Mat m = rank2_matrix(qs, x, y);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec s = svd.singularValues();
  if (s.size() < 2 || s(0) == 0.0) return std::nullopt;
  const int rank = static_cast<int>((s.array() > 1e-10 * s(0)).count());
  if (rank != 2) return std::nullopt;
  const Vec k = svd.matrixV().col(2);
  double a = k(0);
  double b = k(1);
  double c = k(2);
  if (b * b - a * c >= 0.0) return std::nullopt;
  if (a < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  return SymMatrix(Mat(a * x * x.transpose() + b * (x * y.transpose() + y * x.transpose()) +
                       c * y * y.transpose()));
}

double biquartic_p(const SymMatrix& q1s, const SymMatrix& q2s, const Vec& x, const Vec& y) {
  const Mat& q1 = q1s.mat();
  const Mat& q2 = q2s.mat();
  const double x1x = x.dot(q1 * x);
  const double x2x = x.dot(q2 * x);
  const double y1y = y.dot(q1 * y);
  const double y2y = y.dot(q2 * y);
  const double x1y = x.dot(q1 * y);
  const double x2y = x.dot(q2 * y);
  const double first = y1y * x2x - x1x * y2y;
  return first * first - 4.0 * (x1y * y2y - x2y * y1y) * (x1x * x2y - x1y * x2x);
}

const char* to_string(Codim2Case c) {
  switch (c) {
    case Codim2Case::kDependentForms: return "case-i";
    case Codim2Case::kSharedFactor: return "case-ii";
    case Codim2Case::kHasRank2Extremes: return "has-rank2-extremes";
    case Codim2Case::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

Codim2Structure codim2_structure(const SymMatrix& q1s, const SymMatrix& q2s, Rng& rng,
                                 int z_seeds, int p_samples) {
  const int n = q1s.n();
  const Mat& q1 = q1s.mat();
  const Mat& q2 = q2s.mat();
  Mat pair(svec_size(n), 2);
  pair << svec(q1), svec(q2);
  if (matrix_rank(pair, 1e-10) < 2) {
    throw Error(ErrorKind::kInvalidInput, "codim2_structure: forms are linearly dependent");
  }
  std::normal_distribution<double> gauss;
  auto random_vec = [&]() {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  };
  Codim2Structure out;
  const double form_scale = std::max(q1.norm(), q2.norm());

  // Common null vectors with independent gradients, by Newton on the sphere.
  std::optional<Vec> z_good;
  for (int s = 0; s < z_seeds && !z_good; ++s) {
    Vec z = random_vec().normalized();
    for (int it = 0; it < 60; ++it) {
      Vec f(2);
      f << z.dot(q1 * z), z.dot(q2 * z);
      if (f.norm() < 1e-14) break;
      Mat j(2, n);
      j.row(0) = 2.0 * (q1 * z).transpose();
      j.row(1) = 2.0 * (q2 * z).transpose();
      const Vec step = j.completeOrthogonalDecomposition().solve(-f);
      z = (z + step).normalized();
    }
    Vec f(2);
    f << z.dot(q1 * z), z.dot(q2 * z);
    if (f.norm() > 1e-11) continue;
    Mat g(n, 2);
    g << q1 * z, q2 * z;
    Eigen::JacobiSVD<Mat> svd(g);
    const Vec sv = svd.singularValues();
    // Gradients of size sqrt(f) near a degenerate null vector do not count.
    if (sv(1) > 1e-4 * form_scale) z_good = z;
  }
  out.samples = p_samples;
  for (int s = 0; s < p_samples; ++s) {
    const Vec x = random_vec();
    const Vec y = random_vec();
    if (biquartic_p(q1s, q2s, x, y) < -1e-9) {
      out.kind = Codim2Case::kHasRank2Extremes;
      out.x = x;
      out.y = y;
      out.note = "sampled p(x, y) < 0";
      return out;
    }
  }
  if (!z_good) {
    out.kind = Codim2Case::kDependentForms;
    out.note = "no sampled common null vector with independent Q1 z, Q2 z";
    return out;
  }
  const Vec z = *z_good;
  const Vec a1 = q1 * z;
  const Vec a2 = q2 * z;
  // Solve Q_i = a_i u^T + u a_i^T for u by least squares over both forms.
  const int nn = svec_size(n);
  Mat sys(2 * nn, n);
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    sys.col(k) << svec(Mat(a1 * e.transpose() + e * a1.transpose())),
        svec(Mat(a2 * e.transpose() + e * a2.transpose()));
  }
  Vec rhs(2 * nn);
  rhs << svec(q1), svec(q2);
  const Vec u = sys.completeOrthogonalDecomposition().solve(rhs);
  const double res = (sys * u - rhs).norm() / std::max(1.0, rhs.norm());
  Mat three(n, 3);
  three << u, a1, a2;
  if (res <= 1e-7 && matrix_rank(three, 1e-8) == 3) {
    out.kind = Codim2Case::kSharedFactor;
    out.u = u;
    out.q1 = a1;
    out.q2 = a2;
    out.note = "no sampled p < 0; factorization verified";
    return out;
  }
  out.kind = Codim2Case::kInconclusive;
  out.note = "no sampled p < 0, but the shared-factor system has residual " + std::to_string(res);
  return out;
}

}  // namespace rog
