#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rog/cone.hpp"
#include "rog/constructions.hpp"
#include "rog/decompose.hpp"
#include "rog/error.hpp"

using namespace rog;

namespace {

Mat hankel3(double a, double b, double c, double d, double f) {
  return (Mat(3, 3) << a, b, c, b, c, d, c, d, f).finished();
}

bool has_atom(const Decomposition& d, const Vec& x, double tol = 1e-7) {
  const Vec u = x.normalized();
  for (const RankOneAtom& a : d.atoms)
    if (std::abs(std::abs(a.vector.dot(u)) - 1.0) < tol) return true;
  return false;
}

void expect_valid(const SpectrahedralCone& k, const SymMatrix& x, const Decomposition& d) {
  EXPECT_LE((d.sum(k.n()) - x.mat()).norm(), 1e-7 * (1 + x.mat().norm()));
  Mat v(k.n(), static_cast<int>(d.atoms.size()));
  for (size_t i = 0; i < d.atoms.size(); ++i) {
    EXPECT_GT(d.atoms[i].weight, 0.0);
    EXPECT_TRUE(k.contains_ray(d.atoms[i].vector, 1e-7));
    v.col(static_cast<int>(i)) = d.atoms[i].vector;
  }
  EXPECT_EQ(matrix_rank(v, 1e-8), static_cast<int>(d.atoms.size()));
}

SymMatrix random_member(const SpectrahedralCone& k, int terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::uniform_int_distribution<size_t> pick(0, k.generators().size() - 1);
  Mat x = Mat::Zero(k.n(), k.n());
  for (int i = 0; i < terms; ++i) {
    const Vec& g = k.generators()[pick(rng)];
    x += w(rng) * g * g.transpose();
  }
  return SymMatrix(x);
}

}  // namespace

TEST(Carath, IdentityInFullPsd) {
  const ConePtr k = full_psd_cone(3);
  const Decomposition d = carath_decompose(*k, SymMatrix::identity(3));
  ASSERT_EQ(d.atoms.size(), 3u);
  expect_valid(*k, SymMatrix::identity(3), d);
}

TEST(Carath, HankelTwoNodes) {
  const ConePtr k = hankel_cone(3);
  const SymMatrix x(hankel3(2, 0, 2, 0, 2));
  const Decomposition d = carath_decompose(*k, x);
  ASSERT_EQ(d.atoms.size(), 2u);
  EXPECT_TRUE(has_atom(d, Vec::Ones(3)));
  EXPECT_TRUE(has_atom(d, (Vec(3) << 1, -1, 1).finished()));
  for (const RankOneAtom& a : d.atoms) EXPECT_NEAR(a.weight, 3.0, 1e-7);  // |v(+-1)|^2 = 3
  expect_valid(*k, x, d);
}

TEST(Carath, Codim1Identity) {
  const ConePtr k = codim1_cone(SymMatrix(Mat((Mat(2, 2) << 1, 0, 0, -1).finished())));
  const Decomposition d = carath_decompose(*k, SymMatrix::identity(2));
  ASSERT_EQ(d.atoms.size(), 2u);
  EXPECT_TRUE(has_atom(d, (Vec(2) << 1, 1).finished()));
  EXPECT_TRUE(has_atom(d, (Vec(2) << 1, -1).finished()));
  for (const RankOneAtom& a : d.atoms) EXPECT_NEAR(a.weight, 1.0, 1e-8);
}

TEST(Carath, AtomCountEqualsRankOnRandomMembers) {
  std::mt19937_64 rng(21);
  for (const ConePtr& k : {hankel_cone(4), tridiag_cone(5), hankel_cone(2, 2), ternary_quartic_cone()}) {
    for (int t = 0; t < 10; ++t) {
      const SymMatrix x = random_member(*k, 1 + static_cast<int>(rng() % 8), rng);
      const Decomposition d = carath_decompose(*k, x);
      EXPECT_EQ(static_cast<int>(d.atoms.size()), numeric_rank(x));
      expect_valid(*k, x, d);
    }
  }
}

TEST(Carath, RejectsNonMember) {
  EXPECT_THROW(carath_decompose(*hankel_cone(3), SymMatrix::identity(3)), Error);
}

TEST(FullExtension, IdentityOfTriangleCone) {
  const ConePtr k = full_extension(diagonal_cone(2), 3);
  const Decomposition d = decompose_full_extension(*k, SymMatrix::identity(3));
  ASSERT_EQ(d.atoms.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(has_atom(d, Vec::Unit(3, i)));
}

TEST(FullExtension, CountsAgreeWithCarath) {
  std::mt19937_64 rng(22);
  const ConePtr k = full_extension(hankel_cone(3), 5);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix x = random_member(*k, 1 + static_cast<int>(rng() % 6), rng);
    const Decomposition a = decompose_full_extension(*k, x);
    const Decomposition b = carath_decompose(*k, x);
    EXPECT_EQ(a.atoms.size(), b.atoms.size());
    expect_valid(*k, x, a);
  }
}

TEST(FullExtension, PaddedChild) {
  const ConePtr k = full_extension(hankel_cone(3), 4);
  Mat x = Mat::Zero(4, 4);
  x.topLeftCorner(3, 3) = hankel3(2, 0, 2, 0, 2);
  const Decomposition d = decompose_full_extension(*k, SymMatrix(x));
  ASSERT_EQ(d.atoms.size(), 2u);
  for (const RankOneAtom& a : d.atoms) EXPECT_NEAR(a.vector(3), 0.0, 1e-10);
}

TEST(Intertwining, ArrowheadIdentity) {
  const ConePtr k = intertwine(full_psd_cone(2), full_psd_cone(2), coordinate_glue(2, {1}, 2, {0}));
  const Decomposition d = decompose_intertwining(*k, SymMatrix::identity(3));
  EXPECT_EQ(d.atoms.size(), 3u);
  expect_valid(*k, SymMatrix::identity(3), d);
}

TEST(Intertwining, GenericInteriorHasDegreeManyAtoms) {
  std::mt19937_64 rng(23);
  const ConePtr k = intertwine(hankel_cone(3), full_psd_cone(2), coordinate_glue(3, {2}, 2, {0}));
  for (int t = 0; t < 20; ++t) {
    const SymMatrix x = random_member(*k, 12, rng);
    const Decomposition d = decompose_intertwining(*k, x);
    EXPECT_EQ(d.atoms.size(), 4u);
    EXPECT_EQ(d.atoms.size(), carath_decompose(*k, x).atoms.size());
    expect_valid(*k, x, d);
  }
}

TEST(Intertwining, SupportedOnFirstChild) {
  const ConePtr k = intertwine(hankel_cone(3), full_psd_cone(2), coordinate_glue(3, {2}, 2, {0}));
  Mat x = Mat::Zero(4, 4);
  x.topLeftCorner(3, 3) = hankel3(2, 0, 2, 0, 2);
  const Decomposition d = decompose_intertwining(*k, SymMatrix(x));
  ASSERT_EQ(d.atoms.size(), 2u);
  expect_valid(*k, SymMatrix(x), d);
}

TEST(ByExpr, DirectSumOfParts) {
  std::mt19937_64 rng(24);
  const ConePtr k = build(ConeExpr::direct_sum({ConeExpr::hankel(3), ConeExpr::tridiag(3)}));
  const SymMatrix x = random_member(*k, 10, rng);
  const Decomposition d = decompose_by_expr(*k, x);
  EXPECT_EQ(static_cast<int>(d.atoms.size()), numeric_rank(x));
  expect_valid(*k, x, d);
}

TEST(Hankel, SingleNodeAtZero) {
  const Vec v = moment_vector(0.0, Vec::Ones(1), 3);
  const Decomposition d = decompose_hankel(SymMatrix(Mat(v * v.transpose())), 3, 1);
  ASSERT_EQ(d.atoms.size(), 1u);
  EXPECT_TRUE(has_atom(d, Vec::Unit(3, 0)));
}

TEST(Hankel, TwoNodes) {
  const Decomposition d = decompose_hankel(SymMatrix(hankel3(2, 0, 2, 0, 2)), 3, 1);
  ASSERT_EQ(d.atoms.size(), 2u);
  std::vector<double> nodes;
  for (const RankOneAtom& a : d.atoms) nodes.push_back(a.vector(1) / a.vector(0));
  std::sort(nodes.begin(), nodes.end());
  EXPECT_NEAR(nodes[0], -1.0, 1e-8);
  EXPECT_NEAR(nodes[1], 1.0, 1e-8);
}

TEST(Hankel, NodeAtInfinity) {
  Mat x = Mat::Zero(3, 3);
  x(2, 2) = 1;
  const Decomposition d = decompose_hankel(SymMatrix(x), 3, 1);
  ASSERT_EQ(d.atoms.size(), 1u);
  EXPECT_TRUE(has_atom(d, Vec::Unit(3, 2)));
}

TEST(Hankel, RandomNodesRecovered) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> node(-2, 2);
  for (int t = 0; t < 30; ++t) {
    Mat x = Mat::Zero(5, 5);
    std::vector<double> ts{node(rng), node(rng), node(rng)};
    for (double s : ts) {
      const Vec v = moment_vector(s, Vec::Ones(1), 5);
      x += v * v.transpose();
    }
    const Decomposition d = decompose_hankel(SymMatrix(x), 5, 1);
    EXPECT_EQ(d.atoms.size(), 3u);
    for (double s : ts) EXPECT_TRUE(has_atom(d, moment_vector(s, Vec::Ones(1), 5), 1e-5));
  }
}

TEST(BlockToeplitz, SingleAtom) {
  CVec w(2);
  w << 1, std::complex<double>(0, 1);
  const ComplexDecomposition d = decompose_block_toeplitz(HermMatrix(CMat(w * w.adjoint())), 2, 1);
  ASSERT_EQ(d.atoms.size(), 1u);
  const CVec& a = d.atoms[0].vector;
  EXPECT_NEAR(std::abs(a(1) / a(0) - std::complex<double>(0, 1)), 0.0, 1e-8);
  EXPECT_NEAR(d.atoms[0].weight, 2.0, 1e-8);
}

TEST(BlockToeplitz, IdentityAndZero) {
  const ComplexDecomposition d = decompose_block_toeplitz(HermMatrix(CMat::Identity(4, 4)), 2, 2);
  EXPECT_EQ(d.atoms.size(), 4u);
  EXPECT_LE((d.sum(4) - CMat::Identity(4, 4)).norm(), 1e-8);
  EXPECT_TRUE(decompose_block_toeplitz(HermMatrix(CMat::Zero(3, 3)), 3, 1).atoms.empty());
}

TEST(BlockToeplitz, RejectsNonToeplitz) {
  CMat t = CMat::Identity(2, 2);
  t(1, 1) = 2;
  EXPECT_THROW(decompose_block_toeplitz(HermMatrix(t), 2, 1), Error);
}

TEST(Oracle, Examples) {
  Mat e1 = Mat::Zero(3, 1);
  e1(0, 0) = 1;
  const Vec x = extreme_ray_oracle(*full_psd_cone(3), FaceHandle(e1));
  EXPECT_NEAR(std::abs(x.normalized()(0)), 1.0, 1e-12);

  Mat q = Mat::Zero(3, 3);
  q.diagonal() << 1, -1, 0;
  const ConePtr c = codim1_cone(SymMatrix(q));
  const Vec y = extreme_ray_oracle(*c, FaceHandle::whole(3));
  EXPECT_NEAR(y.dot(q * y), 0.0, 1e-10 * y.squaredNorm());

  Mat h(3, 2);
  h << 0, 0, 1, 0, 0, 1;
  const Vec z = extreme_ray_oracle(*diagonal_cone(3), FaceHandle(h));
  EXPECT_NEAR(z(0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(z(1)) + std::abs(z(2)), z.norm(), 1e-12);
}

TEST(Oracle, ZeroFaceHasNoRay) {
  // The Hankel cone has no rank-1 element supported on e2.
  Mat h = Mat::Zero(3, 1);
  h(1, 0) = 1;
  try {
    extreme_ray_oracle(*hankel_cone(3), FaceHandle(h));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoRay);
  }
}
