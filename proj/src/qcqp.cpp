#include "rog/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rog/constructions.hpp"
#include "rog/error.hpp"

namespace rog {

void QcqpProblem::validate() const {
  const int n = s.n();
  if (n == 0) throw Error(ErrorKind::kInvalidInput, "qcqp: empty cost matrix");
  if (b.n() != n) throw Error(ErrorKind::kInvalidInput, "qcqp: B has the wrong size");
  for (const SymMatrix& m : a) {
    if (m.n() != n) throw Error(ErrorKind::kInvalidInput, "qcqp: constraint has the wrong size");
    if (!m.mat().allFinite()) throw Error(ErrorKind::kInvalidInput, "qcqp: non-finite constraint");
  }
  if (!s.mat().allFinite() || !b.mat().allFinite()) {
    throw Error(ErrorKind::kInvalidInput, "qcqp: non-finite entries");
  }
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kInfeasible: return "infeasible";
    case SdpStatus::kUnbounded: return "unbounded";
    case SdpStatus::kMaxIter: return "max-iter";
  }
  return "max-iter";
}

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::kExactWithSolution: return "exact-with-solution";
    case Exactness::kExactByRog: return "exact-by-rog";
    case Exactness::kGapDetected: return "gap-detected";
    case Exactness::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr double kDivergeFloor = -1e12;

Mat constraint_svec(const QcqpProblem& p) {
  Mat c(svec_size(p.n()), static_cast<int>(p.a.size()));
  for (size_t i = 0; i < p.a.size(); ++i) c.col(static_cast<int>(i)) = svec(p.a[i].mat());
  return orth(c, 1e-12);
}

// Basis in svec(r) of {C : U C U^T ∈ L}, with L^⊥ spanned by `comp`.
Mat pulled_back(const Mat& comp, const Mat& u) {
  const int n = static_cast<int>(u.rows());
  const int r = static_cast<int>(u.cols());
  Mat t(svec_size(n), svec_size(r));
  Vec e = Vec::Zero(svec_size(r));
  for (int c = 0; c < svec_size(r); ++c) {
    e.setZero();
    e(c) = 1.0;
    t.col(c) = svec(u * smat(e, r) * u.transpose());
  }
  if (comp.cols() == 0) return Mat::Identity(svec_size(r), svec_size(r));
  return null_space(comp.transpose() * t, 1e-10);
}

std::vector<Mat> as_mats(const Mat& span, int r) {
  std::vector<Mat> out;
  for (int k = 0; k < span.cols(); ++k) out.push_back(smat(span.col(k), r));
  return out;
}

Vec inner_all(const std::vector<Mat>& mats, const Mat& m) {
  Vec v(static_cast<int>(mats.size()));
  for (size_t k = 0; k < mats.size(); ++k) v(static_cast<int>(k)) = (mats[k].array() * m.array()).sum();
  return v;
}

Mat assemble(const std::vector<Mat>& mats, const Vec& z, int count) {
  Mat w = Mat::Zero(mats[0].rows(), mats[0].cols());
  for (int k = 0; k < count; ++k) w += z(k) * mats[k];
  return w;
}

double lambda_min(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Minimizes sigma * cost.z - log det(sum z_k mats_k) on {eq.z = const}.
struct Barrier {
  std::vector<Mat> mats;
  Vec cost;
  Vec eq;
};

struct Centering {
  bool converged = false;
  bool diverged = false;
  int iters = 0;
  double decrement = 0.0;
};

double barrier_value(const Barrier& b, double sigma, const Vec& z) {
  const Mat w = assemble(b.mats, z, static_cast<int>(b.mats.size()));
  Eigen::LLT<Mat> llt(w);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Mat& l = llt.matrixLLT();
  double logdet = 0.0;
  for (int i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) return std::numeric_limits<double>::infinity();
    logdet += 2.0 * std::log(l(i, i));
  }
  return sigma * b.cost.dot(z) - logdet;
}

Centering center(const Barrier& b, double sigma, Vec& z, int max_iter) {
  Centering out;
  const int d = static_cast<int>(b.mats.size());
  const int r = static_cast<int>(b.mats[0].rows());
  const double target = b.eq.dot(z);
  const double eq2 = b.eq.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    out.iters = it + 1;
    const Mat w = assemble(b.mats, z, d);
    Eigen::LLT<Mat> llt(w);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::kNumericalFailure, "barrier: iterate left the cone");
    const Mat linv = llt.matrixL().solve(Mat::Identity(r, r));
    std::vector<Mat> g(d);
    Vec grad(d);
    for (int k = 0; k < d; ++k) {
      g[k] = linv * b.mats[k] * linv.transpose();
      grad(k) = sigma * b.cost(k) - g[k].trace();
    }
    Mat kkt = Mat::Zero(d + 1, d + 1);
    for (int k = 0; k < d; ++k) {
      for (int l = k; l < d; ++l) kkt(k, l) = kkt(l, k) = (g[k].array() * g[l].array()).sum();
    }
    // Equality row scaled to the Hessian so the system stays balanced.
    const double row = std::sqrt(std::max(kkt.topLeftCorner(d, d).trace() / d, 1e-300) / eq2);
    kkt.block(0, d, d, 1) = row * b.eq;
    kkt.block(d, 0, 1, d) = row * b.eq.transpose();
    Vec rhs = Vec::Zero(d + 1);
    rhs.head(d) = -grad;
    const Vec sol = kkt.fullPivLu().solve(rhs);
    Vec dz = sol.head(d);
    dz -= (b.eq.dot(dz) / eq2) * b.eq;
    const double dec = -grad.dot(dz);
    if (!std::isfinite(dec)) throw Error(ErrorKind::kNumericalFailure, "barrier: singular Newton system");
    out.decrement = dec;
    if (dec < 1e-10) {
      out.converged = true;
      return out;
    }
    const double f0 = barrier_value(b, sigma, z);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const double f1 = barrier_value(b, sigma, z + alpha * dz);
      if (f1 <= f0 - 0.25 * alpha * dec) {
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      // Rounding floor: the Newton model no longer resolves any decrease.
      out.converged = dec < 1e-6;
      return out;
    }
    if (alpha == 1.0) {
      // Expand along recession directions so divergence shows up quickly.
      double fa = barrier_value(b, sigma, z + dz);
      for (int ex = 0; ex < 40; ++ex) {
        const double f2 = barrier_value(b, sigma, z + 2.0 * alpha * dz);
        if (!(f2 < fa - 0.25 * alpha * dec)) break;
        fa = f2;
        alpha *= 2.0;
      }
    }
    z += alpha * dz;
    z += ((target - b.eq.dot(z)) / eq2) * b.eq;
    if (b.cost.dot(z) < kDivergeFloor) {
      out.diverged = true;
      return out;
    }
  }
  return out;
}

int effective_rank(const Vec& desc, double rel = 1e-7) {
  if (desc.size() == 0 || desc(0) <= 0.0) return 0;
  int r = 0;
  while (r < desc.size() && desc(r) > rel * desc(0)) ++r;
  return r;
}

struct Slice {
  Mat u;                  // n x r, orthonormal
  std::vector<Mat> mats;  // orthonormal basis of L_U
  Vec z;                  // strictly feasible point with trace 1
};

// Facial reduction followed by an interior point of L_U ∩ S^r_{++}.
std::optional<Slice> interior_slice(const Mat& comp, int n, int* outer_iters) {
  Mat u = Mat::Identity(n, n);
  for (int round = 0; round <= n; ++round) {
    const int r = static_cast<int>(u.cols());
    if (r == 0) return std::nullopt;
    const Mat span = pulled_back(comp, u);
    if (span.cols() == 0) return std::nullopt;
    Slice sl;
    sl.u = u;
    sl.mats = as_mats(span, r);
    const int d = static_cast<int>(sl.mats.size());
    Vec c(d);
    for (int k = 0; k < d; ++k) c(k) = sl.mats[k].trace();
    if (c.norm() < 1e-12) return std::nullopt;
    Vec z0 = c / c.squaredNorm();
    const Mat x0 = assemble(sl.mats, z0, d);
    if (lambda_min(x0) > 1e-9 * x0.norm()) {
      sl.z = z0;
      return sl;
    }
    // max t  s.t.  X - t I > 0, tr X = 1.
    Barrier ph;
    ph.mats = sl.mats;
    ph.mats.push_back(-Mat::Identity(r, r));
    ph.cost = Vec::Zero(d + 1);
    ph.cost(d) = -1.0;
    ph.eq = Vec::Zero(d + 1);
    ph.eq.head(d) = c;
    Vec z(d + 1);
    z.head(d) = z0;
    z(d) = lambda_min(x0) - 1.0;
    double sigma = 1.0;
    bool interior = false;
    for (int outer = 0; outer < 80; ++outer) {
      center(ph, sigma, z, 200);
      if (outer_iters) ++*outer_iters;
      const Mat x = assemble(sl.mats, z, d);
      if (lambda_min(x) > 1e-9 * x.norm()) {
        interior = true;
        break;
      }
      if (r / sigma < 1e-13) break;
      sigma *= 4.0;
    }
    if (interior) {
      sl.z = z.head(d);
      return sl;
    }
    if (z(d) < -1e-7) return std::nullopt;
    const Mat x = assemble(sl.mats, z, d);
    const EigDecomp e = eig_sym(SymMatrix(x));
    int rank = effective_rank(e.values, 1e-6);
    // Prefer a clear spectral gap when the tail decays slowly.
    double best = 0.0;
    for (int i = 0; i + 1 < r; ++i) {
      if (e.values(i + 1) <= 0.0) {
        if (best < 1e300) {
          best = 1e300;
          rank = i + 1;
        }
        break;
      }
      const double gap = e.values(i) / e.values(i + 1);
      if (gap > 1e3 && gap > best && e.values(i + 1) < 1e-4 * e.values(0)) {
        best = gap;
        rank = i + 1;
      }
    }
    if (rank >= r || rank == 0) return std::nullopt;
    u = u * e.vectors.leftCols(rank);
  }
  return std::nullopt;
}

}  // namespace

ConePtr induced_cone(const QcqpProblem& p) {
  p.validate();
  const int n = p.n();
  const Mat comp = constraint_svec(p);
  const Mat span = comp.cols() == 0 ? Mat(Mat::Identity(svec_size(n), svec_size(n)))
                                    : null_space(comp.transpose(), 1e-12);
  return std::make_shared<SpectrahedralCone>(n, span, std::vector<Vec>{});
}

ConePtr recognize_certificate(const QcqpProblem& p) {
  p.validate();
  const int n = p.n();
  const Mat comp = constraint_svec(p);
  const int m = static_cast<int>(comp.cols());
  if (m == 0) return full_psd_cone(n);
  auto in_span = [&](const Mat& e) {
    const Vec v = svec(e).normalized();
    return (v - comp * (comp.transpose() * v)).norm() < 1e-9;
  };
  if (m == 1) {
    const EigDecomp e = eig_sym(SymMatrix(smat(comp.col(0), n)));
    const double top = e.values.cwiseAbs().maxCoeff();
    if (e.values(0) > 1e-10 * top && e.values(n - 1) < -1e-10 * top) {
      return codim1_cone(SymMatrix(smat(comp.col(0), n)));
    }
  }
  for (int i = 0; i < n; ++i) {
    Mat e = Mat::Zero(n, n);
    e(i, i) = 1.0;
    if (in_span(e)) return nullptr;
  }
  ChordalGraph g;
  g.n = n;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = e(j, i) = 1.0;
      if (in_span(e)) {
        ++zeros;
      } else {
        g.edges.emplace_back(i, j);
      }
    }
  }
  if (zeros != m || !is_chordal(g)) return nullptr;
  return chordal_cone(g);
}

SdpSolution solve_relaxation(const QcqpProblem& p) {
  p.validate();
  const int n = p.n();
  SdpSolution out;
  out.x = SymMatrix::zero(n);
  const Mat comp = constraint_svec(p);
  int iters = 0;
  const auto slice = interior_slice(comp, n, &iters);
  if (!slice) {
    out.status = SdpStatus::kInfeasible;
    out.iterations = iters;
    return out;
  }
  const Mat& u = slice->u;
  const int r = static_cast<int>(u.cols());
  out.face_rank = r;
  const std::vector<Mat>& mats = slice->mats;
  const int d = static_cast<int>(mats.size());
  const Vec bv = inner_all(mats, u.transpose() * p.b.mat() * u);
  const Vec sv = inner_all(mats, u.transpose() * p.s.mat() * u);
  Vec c(d);
  for (int k = 0; k < d; ++k) c(k) = mats[k].trace();
  Vec z = slice->z;
  const double bscale = std::max(1.0, p.b.mat().norm());

  // Interior point with <B,X> > 0.
  if (bv.dot(z) <= 1e-9 * bscale) {
    Barrier bp{mats, -bv, c};
    double sigma = 1.0;
    bool ok = false;
    for (int outer = 0; outer < 80 && !ok; ++outer) {
      center(bp, sigma, z, 200);
      ++iters;
      ok = bv.dot(z) > 1e-9 * bscale;
      if (r / sigma < 1e-13) break;
      sigma *= 4.0;
    }
    if (!ok) {
      out.status = SdpStatus::kInfeasible;
      out.iterations = iters;
      return out;
    }
  }
  z /= bv.dot(z);

  // A direction D in K with <B,D> = 0 and <S,D> < 0 makes the relaxation
  // unbounded; it can only exist when B is not positive definite.
  if (lambda_min(p.b.mat()) <= 1e-12 * bscale) {
    QcqpProblem rec{p.s, SymMatrix::identity(n), p.a};
    rec.a.push_back(p.b);
    const SdpSolution dir = solve_relaxation(rec);
    iters += dir.iterations;
    if (dir.status == SdpStatus::kOptimal &&
        dir.objective < -1e-9 * (1.0 + p.s.mat().norm())) {
      out.status = SdpStatus::kUnbounded;
      out.x = dir.x;
      out.objective = dir.objective;
      out.iterations = iters;
      return out;
    }
  }

  Barrier mp{mats, sv, bv};
  double sigma = 1.0;
  out.status = SdpStatus::kMaxIter;
  for (int outer = 0; outer < 150; ++outer) {
    const Vec last = z;
    Centering cr;
    try {
      cr = center(mp, sigma, z, 200);
    } catch (const Error&) {
      // Unattained infimum: keep the best interior iterate.
      z = last;
      break;
    }
    ++iters;
    const double obj = sv.dot(z);
    if (cr.diverged || obj < kDivergeFloor) {
      out.status = SdpStatus::kUnbounded;
      break;
    }
    if ((cr.converged || cr.decrement < 1e-6) && r / sigma <= 1e-10 * (1.0 + std::abs(obj))) {
      out.status = SdpStatus::kOptimal;
      break;
    }
    sigma *= 5.0;
  }
  const Mat xu = assemble(mats, z, d);
  out.x = SymMatrix(Mat(u * xu * u.transpose()));
  out.objective = (p.s.mat().array() * out.x.mat().array()).sum();
  out.duality_gap = r / sigma;
  out.iterations = iters;
  return out;
}

Purification purify(const QcqpProblem& p, const SymMatrix& x) {
  p.validate();
  const int n = p.n();
  const Mat comp = constraint_svec(p);
  Purification out;
  const double obj0 = (p.s.mat().array() * x.mat().array()).sum();
  const EigDecomp e = eig_sym(x);
  out.rank_before = effective_rank(e.values);
  // Keep the numerically positive part; tiny eigenvalues of a barrier
  // iterate may turn negative once projected back onto the slice.
  int r = 0;
  Mat u;
  Mat cur;
  for (double cut : {1e-13, 1e-11, 1e-9, 1e-7}) {
    r = effective_rank(e.values, cut);
    u = e.vectors.leftCols(r);
    cur = u.transpose() * x.mat() * u;
    const std::vector<Mat> mats = as_mats(pulled_back(comp, u), r);
    if (mats.empty()) continue;
    const Vec bv = inner_all(mats, u.transpose() * p.b.mat() * u);
    Vec z = inner_all(mats, cur);
    if (bv.norm() > 1e-14) z += (1.0 - bv.dot(z)) * bv / bv.squaredNorm();
    if (lambda_min(assemble(mats, z, static_cast<int>(mats.size()))) > 0.0) break;
  }
  Mat best = x.mat();
  for (int guard = 0; guard <= n && r > 0; ++guard) {
    const std::vector<Mat> mats = as_mats(pulled_back(comp, u), r);
    if (mats.empty()) break;
    const int d = static_cast<int>(mats.size());
    const Vec bv = inner_all(mats, u.transpose() * p.b.mat() * u);
    const Vec sv = inner_all(mats, u.transpose() * p.s.mat() * u);
    // Nearest point of the slice {<B,C> = 1} within L_U.
    Vec z = inner_all(mats, cur);
    if (bv.norm() > 1e-14) z += (1.0 - bv.dot(z)) * bv / bv.squaredNorm();
    const Mat c = assemble(mats, z, d);
    const EigDecomp ce = eig_sym(SymMatrix(c));
    if (ce.values(r - 1) <= 0.0) break;
    best = u * c * u.transpose();
    Mat cons(2, d);
    cons.row(0) = bv.transpose();
    cons.row(1) = sv.transpose();
    const Mat dirs = null_space(cons, 1e-10);
    if (dirs.cols() == 0) break;
    const Mat dm = assemble(mats, dirs.col(0), d);
    const Mat isq = ce.vectors * ce.values.cwiseSqrt().cwiseInverse().asDiagonal() *
                    ce.vectors.transpose();
    const EigDecomp me = eig_sym(SymMatrix(Mat(isq * dm * isq)));
    const double lmax = me.values(0);
    const double lmin = me.values(r - 1);
    Mat next;
    if (lmin < 0.0) {
      next = c - dm / lmin;
    } else if (lmax > 0.0) {
      next = c - dm / lmax;
    } else {
      break;
    }
    const EigDecomp ne = eig_sym(SymMatrix(next));
    const int nr = effective_rank(ne.values, 1e-9);
    if (nr >= r || nr == 0) break;
    u = u * ne.vectors.leftCols(nr);
    cur = ne.vectors.leftCols(nr).transpose() * next * ne.vectors.leftCols(nr);
    r = nr;
    best = u * cur * u.transpose();
  }
  out.x = SymMatrix(best);
  out.rank_after = effective_rank(eig_sym(out.x).values);
  out.objective_change = (p.s.mat().array() * out.x.mat().array()).sum() - obj0;
  return out;
}

namespace {

double quad(const SymMatrix& q, const Vec& x) { return x.dot(q.mat() * x); }

bool rank1_feasible(const QcqpProblem& p, const Vec& x, double tol) {
  for (const SymMatrix& a : p.a) {
    if (std::abs(quad(a, x)) > tol) return false;
  }
  return std::abs(quad(p.b, x) - 1.0) <= tol;
}

// Gauss-Newton onto {x^T A_i x = 0} (and x^T B x = 1 when `with_b`).
bool project_variety(const QcqpProblem& p, Vec& x, bool with_b) {
  const int k = static_cast<int>(p.a.size()) + (with_b ? 1 : 0);
  if (k == 0) return true;
  const int n = p.n();
  for (int it = 0; it < 60; ++it) {
    Vec f(k);
    Mat j(k, n);
    for (size_t i = 0; i < p.a.size(); ++i) {
      f(static_cast<int>(i)) = quad(p.a[i], x);
      j.row(static_cast<int>(i)) = 2.0 * (p.a[i].mat() * x).transpose();
    }
    if (with_b) {
      f(k - 1) = quad(p.b, x) - 1.0;
      j.row(k - 1) = 2.0 * (p.b.mat() * x).transpose();
    }
    const double scale = with_b ? 1.0 : x.squaredNorm();
    if (f.norm() <= 1e-13 * std::max(scale, 1e-300)) return true;
    x += j.completeOrthogonalDecomposition().solve(-f);
    if (!x.allFinite() || x.norm() < 1e-150) return false;
  }
  Vec f(static_cast<int>(p.a.size()));
  for (size_t i = 0; i < p.a.size(); ++i) f(static_cast<int>(i)) = quad(p.a[i], x);
  return f.norm() <= 1e-10 * x.squaredNorm() && (!with_b || std::abs(quad(p.b, x) - 1.0) <= 1e-10);
}

// Local descent of x^T S x on the rank-1 feasible set.
Vec polish(const QcqpProblem& p, Vec x) {
  const int n = p.n();
  const int k = static_cast<int>(p.a.size()) + 1;
  double val = quad(p.s, x);
  double step = 0.1;
  for (int it = 0; it < 300 && step > 1e-14; ++it) {
    Mat j(k, n);
    for (size_t i = 0; i < p.a.size(); ++i) j.row(static_cast<int>(i)) = (p.a[i].mat() * x).transpose();
    j.row(k - 1) = (p.b.mat() * x).transpose();
    const Mat basis = null_space(j, 1e-10);
    if (basis.cols() == 0) break;
    const Vec g = basis * (basis.transpose() * (2.0 * (p.s.mat() * x)));
    if (g.norm() < 1e-13) break;
    Vec y = x - step * g;
    if (project_variety(p, y, true) && quad(p.s, y) < val) {
      x = y;
      val = quad(p.s, y);
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return x;
}

bool same_span(const SpectrahedralCone& a, const SpectrahedralCone& b) {
  if (a.n() != b.n() || a.dim() != b.dim()) return false;
  const Mat& sa = a.span_svec();
  const Mat& sb = b.span_svec();
  return (sa - sb * (sb.transpose() * sa)).norm() <= 1e-8 * std::max(1.0, std::sqrt(double(a.dim())));
}

}  // namespace

ExactnessCertificate certify_exactness(const QcqpProblem& p, const QcqpOptions& opt) {
  p.validate();
  ExactnessCertificate cert;
  ConePtr rog = opt.certificate;
  if (rog) {
    if (!rog->certificate_complete()) {
      throw Error(ErrorKind::kMissingCertificate, "certify_exactness: certificate cone is not certified");
    }
    if (!same_span(*rog, *induced_cone(p))) {
      throw Error(ErrorKind::kInvalidInput,
                  "certify_exactness: certificate cone does not match the constraint subspace");
    }
  } else {
    rog = recognize_certificate(p);
    if (rog && !rog->certificate_complete()) rog = nullptr;
  }
  const SdpSolution sol = solve_relaxation(p);
  cert.relaxation = sol.status;
  cert.relaxed_value = sol.objective;
  if (sol.status != SdpStatus::kOptimal) {
    cert.status = Exactness::kInconclusive;
    switch (sol.status) {
      case SdpStatus::kInfeasible:
        cert.note = "relaxation infeasible, hence the QCQP is infeasible";
        if (rog) cert.status = Exactness::kExactByRog;
        break;
      case SdpStatus::kUnbounded:
        cert.note = "relaxation unbounded";
        break;
      default:
        cert.note = "barrier method hit the iteration cap; best iterate reported";
        break;
    }
    return cert;
  }
  const double tol = 1e-6 * (1.0 + std::abs(sol.objective));
  const Purification pur = purify(p, sol.x);
  cert.relaxed_rank = pur.rank_before;
  cert.purified_rank = pur.rank_after;

  auto accept = [&](const Vec& x) {
    if (!rank1_feasible(p, x, 1e-6)) return false;
    const double v = quad(p.s, x);
    if (std::abs(v - sol.objective) > tol) return false;
    cert.x_opt = x;
    cert.extracted_value = v;
    return true;
  };
  auto normalize = [&](Vec x) -> std::optional<Vec> {
    const double q = quad(p.b, x);
    if (!(q > 0.0)) return std::nullopt;
    return Vec(x / std::sqrt(q));
  };

  if (pur.rank_after == 1) {
    const EigDecomp e = eig_sym(pur.x);
    if (auto x = normalize(Vec(e.vectors.col(0) * std::sqrt(e.values(0))))) {
      if (accept(*x)) {
        cert.status = rog ? Exactness::kExactByRog : Exactness::kExactWithSolution;
        return cert;
      }
    }
  }
  if (rog) {
    cert.status = Exactness::kExactByRog;
    try {
      const Decomposition dec = carath_decompose(*rog, pur.x);
      std::optional<Vec> best;
      double best_val = std::numeric_limits<double>::infinity();
      for (const auto& atom : dec.atoms) {
        const auto x = normalize(atom.vector);
        if (!x) continue;
        const double v = quad(p.s, *x);
        if (v < best_val) {
          best_val = v;
          best = x;
        }
      }
      if (best && accept(*best)) return cert;
      cert.note = "certified, but no extracted atom met the tolerance";
    } catch (const Error& err) {
      cert.note = std::string("certified, extraction failed: ") + err.what();
    }
    return cert;
  }

  // No certificate: sample the rank-1 feasible set.
  Rng rng(opt.seed);
  std::normal_distribution<double> gauss;
  const int n = p.n();
  std::vector<std::pair<double, Vec>> top;
  int count = 0;
  for (int attempt = 0; attempt < 4 * opt.samples && count < opt.samples; ++attempt) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    if (!project_variety(p, x, false)) continue;
    const auto xn = normalize(x);
    if (!xn) continue;
    ++count;
    const double v = quad(p.s, *xn);
    top.emplace_back(v, *xn);
    if (top.size() > 64) {
      std::nth_element(top.begin(), top.begin() + 16, top.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      top.resize(16);
    }
  }
  cert.samples = count;
  if (count == 0) {
    cert.status = Exactness::kInconclusive;
    cert.note = "no feasible rank-1 sample found";
    return cert;
  }
  std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (top.size() > 16) top.resize(16);
  double best_val = std::numeric_limits<double>::infinity();
  Vec best_x;
  for (auto& [v, x] : top) {
    const Vec y = polish(p, x);
    const double pv = quad(p.s, y);
    if (pv < best_val) {
      best_val = pv;
      best_x = y;
    }
  }
  cert.sampled_min = best_val;
  if (accept(best_x)) {
    cert.status = Exactness::kExactWithSolution;
    cert.note = "rank-1 point found by sampling";
    return cert;
  }
  if (best_val > sol.objective + tol) {
    cert.status = Exactness::kGapDetected;
    cert.extracted_value = best_val;
    cert.x_opt = best_x;
    cert.note = "every sampled rank-1 point lies above the relaxed value";
    return cert;
  }
  cert.status = Exactness::kInconclusive;
  cert.note = "purified rank > 1 and sampling did not separate the values";
  return cert;
}

}  // namespace rog
