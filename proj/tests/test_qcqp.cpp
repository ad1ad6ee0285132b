#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rog/constructions.hpp"
#include "rog/error.hpp"
#include "rog/qcqp.hpp"

using namespace rog;

namespace {

Mat random_sym(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return (a + a.transpose()) / 2;
}

SymMatrix offdiag(int n, int i, int j) {
  Mat a = Mat::Zero(n, n);
  a(i, j) = a(j, i) = 1;
  return SymMatrix(a);
}

double inner(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

QcqpOptions fast() {
  QcqpOptions o;
  o.samples = 2000;
  return o;
}

// Random instance whose constraints vanish on a positive definite X0, so the
// relaxation is strictly feasible; B positive definite keeps it bounded.
QcqpProblem random_instance(int n, int k, bool identity_b, std::mt19937_64& rng) {
  QcqpProblem p;
  p.s = SymMatrix(random_sym(n, rng));
  const Mat g = random_sym(n, rng);
  p.b = identity_b ? SymMatrix::identity(n)
                   : SymMatrix(Mat(g * g.transpose() + Mat::Identity(n, n)));
  const Mat h = random_sym(n, rng);
  const Mat x0 = h * h.transpose() + Mat::Identity(n, n);
  for (int i = 0; i < k; ++i) {
    Mat a = random_sym(n, rng);
    a -= inner(a, x0) / inner(x0, x0) * x0;
    p.a.push_back(SymMatrix(a));
  }
  return p;
}

// Dual multipliers from Z X = 0 with Z = S - y0 B - sum y_i A_i, by least squares.
struct DualCheck {
  double complementarity;
  double dual_min_eig;
  double dual_value;
};

DualCheck dual_check(const QcqpProblem& p, const Mat& x) {
  const int n = p.n();
  const int k = static_cast<int>(p.a.size());
  Mat lhs(n * n, k + 1);
  const Mat bx = p.b.mat() * x;
  lhs.col(0) = Eigen::Map<const Vec>(bx.data(), n * n);
  for (int i = 0; i < k; ++i) {
    const Mat ax = p.a[i].mat() * x;
    lhs.col(i + 1) = Eigen::Map<const Vec>(ax.data(), n * n);
  }
  const Mat sxm = p.s.mat() * x;
  const Vec rhs = Eigen::Map<const Vec>(sxm.data(), n * n);
  const Vec y = lhs.completeOrthogonalDecomposition().solve(rhs);
  Mat z = p.s.mat() - y(0) * p.b.mat();
  for (int i = 0; i < k; ++i) z -= y(i + 1) * p.a[i].mat();
  Eigen::SelfAdjointEigenSolver<Mat> es(z);
  return {(z * x).norm(), es.eigenvalues()(0), y(0)};
}

}  // namespace

TEST(InducedCone, Examples) {
  QcqpProblem p{SymMatrix::identity(3), SymMatrix::identity(3), {}};
  EXPECT_EQ(induced_cone(p)->dim(), 6);
  p.a.push_back(offdiag(3, 0, 2));
  EXPECT_EQ(induced_cone(p)->dim(), 5);
  const Mat q = (Mat(2, 2) << 1, 0, 0, -1).finished();
  EXPECT_EQ(induced_cone({SymMatrix::identity(2), SymMatrix::identity(2), {SymMatrix(q)}})->dim(), 2);
}

TEST(RecognizeCertificate, ChordalZeroPattern) {
  const QcqpProblem p{SymMatrix::identity(4), SymMatrix::identity(4),
                      {offdiag(4, 0, 2), offdiag(4, 0, 3), offdiag(4, 1, 3)}};
  const ConePtr k = recognize_certificate(p);
  ASSERT_TRUE(k);
  EXPECT_EQ(k->dim(), 7);
  EXPECT_TRUE(k->certificate_complete());
  const QcqpProblem c4{SymMatrix::identity(4), SymMatrix::identity(4),
                       {offdiag(4, 0, 2), offdiag(4, 1, 3)}};
  EXPECT_FALSE(recognize_certificate(c4));
}

TEST(Relaxation, TraceNormalized) {
  const SdpSolution s = solve_relaxation({SymMatrix::identity(2), SymMatrix::identity(2), {}});
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-7);
}

TEST(Relaxation, Infeasible) {
  const SdpSolution s = solve_relaxation({SymMatrix::identity(2), SymMatrix::zero(2), {}});
  EXPECT_EQ(s.status, SdpStatus::kInfeasible);
  const ExactnessCertificate c =
      certify_exactness({SymMatrix::identity(2), SymMatrix::zero(2), {}}, fast());
  EXPECT_EQ(c.relaxation, SdpStatus::kInfeasible);
}

TEST(Relaxation, Unbounded) {
  Mat s = Mat::Zero(2, 2);
  s(0, 0) = -1;
  Mat b = Mat::Zero(2, 2);
  b(1, 1) = 1;
  EXPECT_EQ(solve_relaxation({SymMatrix(s), SymMatrix(b), {}}).status, SdpStatus::kUnbounded);
}

TEST(Relaxation, MaxCutOnOneEdge) {
  // min -x^T L x with x1^2 = x2^2 and |x|^2 / 2 = 1: the cut x = (1, -1) gives -4.
  const Mat lap = (Mat(2, 2) << 1, -1, -1, 1).finished();
  const Mat eq = (Mat(2, 2) << 1, 0, 0, -1).finished();
  const QcqpProblem p{SymMatrix(Mat(-lap)), SymMatrix(Mat(0.5 * Mat::Identity(2, 2))), {SymMatrix(eq)}};
  double brute = 1e300;
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0}) {
      const Vec x = (Vec(2) << a, b).finished();
      brute = std::min(brute, x.dot(-lap * x));
    }
  const ExactnessCertificate c = certify_exactness(p, fast());
  EXPECT_NEAR(c.relaxed_value, brute, 1e-6);
  EXPECT_NE(c.status, Exactness::kGapDetected);
  ASSERT_TRUE(c.x_opt.has_value());
  EXPECT_NEAR(c.extracted_value, brute, 1e-6);
}

TEST(Relaxation, KktResidualsOnRandomFeasibleInstances) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int k = static_cast<int>(rng() % std::min(4, n));
    const QcqpProblem p = random_instance(n, k, t % 3 != 0, rng);
    const SdpSolution s = solve_relaxation(p);
    ASSERT_EQ(s.status, SdpStatus::kOptimal);
    const Mat& x = s.x.mat();
    const double scale = 1 + p.s.mat().norm();
    EXPECT_NEAR(inner(p.b.mat(), x), 1.0, 1e-6);
    for (const SymMatrix& a : p.a) EXPECT_LE(std::abs(inner(a.mat(), x)), 1e-6 * (1 + a.mat().norm()));
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(x).eigenvalues()(0), -1e-9);
    const DualCheck d = dual_check(p, x);
    EXPECT_LE(d.complementarity, 1e-6 * scale) << "instance " << t;
    EXPECT_GE(d.dual_min_eig, -1e-6 * scale) << "instance " << t;
    EXPECT_NEAR(d.dual_value, s.objective, 1e-6 * scale) << "instance " << t;
  }
}

TEST(Purify, NeverRaisesRankOrMovesObjective) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + static_cast<int>(rng() % 4);
    QcqpProblem p = random_instance(n, 2, true, rng);
    // A degenerate objective leaves a large optimal face to purify.
    const Vec v = random_sym(n, rng).col(0);
    p.s = SymMatrix(Mat(v * v.transpose()));
    const SdpSolution s = solve_relaxation(p);
    ASSERT_EQ(s.status, SdpStatus::kOptimal);
    const Purification pur = purify(p, s.x);
    EXPECT_LE(pur.rank_after, pur.rank_before);
    EXPECT_LE(std::abs(pur.objective_change), 1e-7);
    EXPECT_LE(std::abs(inner(p.s.mat(), pur.x.mat()) - s.objective), 1e-7 * (1 + std::abs(s.objective)));
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(pur.x.mat()).eigenvalues()(0), -1e-8);
  }
}

TEST(Certify, NoConstraintsIsExact) {
  std::mt19937_64 rng(63);
  const QcqpProblem p{SymMatrix(random_sym(4, rng)), SymMatrix::identity(4), {}};
  const ExactnessCertificate c = certify_exactness(p, fast());
  EXPECT_EQ(c.status, Exactness::kExactByRog);
  ASSERT_TRUE(c.x_opt.has_value());
  EXPECT_NEAR(c.relaxed_value, Eigen::SelfAdjointEigenSolver<Mat>(p.s.mat()).eigenvalues()(0), 1e-6);
}

TEST(Certify, Codim1InTwoVariables) {
  std::mt19937_64 rng(64);
  const Mat q = (Mat(2, 2) << 1, 0, 0, -1).finished();
  for (int t = 0; t < 10; ++t) {
    const QcqpProblem p{SymMatrix(random_sym(2, rng)), SymMatrix::identity(2), {SymMatrix(q)}};
    const ExactnessCertificate c = certify_exactness(p, fast());
    EXPECT_TRUE(c.status == Exactness::kExactByRog || c.status == Exactness::kExactWithSolution);
    ASSERT_TRUE(c.x_opt.has_value());
    const Vec& x = *c.x_opt;
    EXPECT_NEAR(std::abs(x(0)), std::abs(x(1)), 1e-6);
    const double r = 1 / std::sqrt(2.0);
    const double brute = std::min((Vec(2) << r, r).finished().dot(p.s.mat() * (Vec(2) << r, r).finished()),
                                  (Vec(2) << r, -r).finished().dot(p.s.mat() * (Vec(2) << r, -r).finished()));
    EXPECT_NEAR(c.extracted_value, brute, 1e-6);
    EXPECT_NEAR(c.relaxed_value, brute, 1e-6);
  }
}

TEST(Certify, ChordalPatternIsExactByRog) {
  std::mt19937_64 rng(65);
  const QcqpProblem p{SymMatrix(random_sym(4, rng)), SymMatrix::identity(4),
                      {offdiag(4, 0, 2), offdiag(4, 0, 3), offdiag(4, 1, 3)}};
  const ExactnessCertificate c = certify_exactness(p, fast());
  EXPECT_EQ(c.status, Exactness::kExactByRog);
  EXPECT_EQ(c.purified_rank, 1);
  ASSERT_TRUE(c.x_opt.has_value());
  EXPECT_NEAR(c.extracted_value, c.relaxed_value, 1e-5 * (1 + std::abs(c.relaxed_value)));
}

TEST(Certify, FourCycleIsNeverExactByRog) {
  std::mt19937_64 rng(66);
  for (int t = 0; t < 10; ++t) {
    const QcqpProblem p{SymMatrix(random_sym(4, rng)), SymMatrix::identity(4),
                        {offdiag(4, 0, 2), offdiag(4, 1, 3)}};
    EXPECT_NE(certify_exactness(p, fast()).status, Exactness::kExactByRog);
  }
}

TEST(Certify, CertificateMustMatchSpan) {
  QcqpOptions o = fast();
  o.certificate = hankel_cone(3);
  EXPECT_THROW(certify_exactness({SymMatrix::identity(3), SymMatrix::identity(3), {}}, o), Error);
}

TEST(Certify, Trichotomy) {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng() % 4);
    QcqpProblem p = random_instance(n, 1, true, rng);
    if (t % 3 == 1) p.b = SymMatrix::zero(n);
    if (t % 3 == 2) p.b = SymMatrix(random_sym(n, rng));
    const ExactnessCertificate c = certify_exactness(p, fast());
    const bool value = c.relaxation == SdpStatus::kOptimal;
    const bool infeasible = c.relaxation == SdpStatus::kInfeasible;
    const bool unbounded = c.relaxation == SdpStatus::kUnbounded;
    EXPECT_EQ(value + infeasible + unbounded, 1) << to_string(c.relaxation);
    if (value && c.x_opt) EXPECT_GE(c.extracted_value, c.relaxed_value - 1e-6 * (1 + std::abs(c.relaxed_value)));
    if (unbounded) {
      // The reported direction certifies unboundedness on its own.
      const Mat d = solve_relaxation(p).x.mat();
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(d).eigenvalues()(0), -1e-9);
      EXPECT_NEAR(d.trace(), 1.0, 1e-8);
      EXPECT_LE(std::abs(inner(p.b.mat(), d)), 1e-8);
      for (const SymMatrix& a : p.a) EXPECT_LE(std::abs(inner(a.mat(), d)), 1e-8);
      EXPECT_LT(inner(p.s.mat(), d), 0.0);
    }
  }
}

TEST(Validate, RejectsMismatchedSizes) {
  const QcqpProblem p{SymMatrix::identity(2), SymMatrix::identity(3), {}};
  EXPECT_THROW(p.validate(), Error);
}
