#include <gtest/gtest.h>

#include "iflt/linalg.hpp"
#include "oracles.hpp"

using namespace iflt;

TEST(PseudoInverse, Identity) {
  const Matrix i3 = Matrix::Identity(3, 3);
  EXPECT_LE((pseudo_inverse(i3) - i3).norm(), 1e-14);
}

TEST(PseudoInverse, DiagonalWithZero) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  EXPECT_LE((pseudo_inverse(d) - expected).norm(), 1e-14);
}

TEST(PseudoInverse, AllOnes) {
  const Matrix ones = Matrix::Ones(2, 2);
  const Matrix x = pseudo_inverse(ones);
  EXPECT_LE((x - Matrix::Constant(2, 2, 0.25)).norm(), 1e-14);
  EXPECT_LE(oracle::penrose(ones, x).worst(), 1e-12);
}

TEST(PseudoInverse, ZeroAndEmpty) {
  EXPECT_EQ(pseudo_inverse(Matrix::Zero(3, 2)).norm(), 0.0);
  const Matrix z = pseudo_inverse(Matrix::Zero(3, 2));
  EXPECT_EQ(z.rows(), 2);
  EXPECT_EQ(z.cols(), 3);
  EXPECT_EQ(pseudo_inverse(Matrix(0, 0)).size(), 0);
}

TEST(PseudoInverse, NonFiniteRejected) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(pseudo_inverse(a), InvalidInput);
}

TEST(PseudoInverse, BadToleranceRejected) {
  EXPECT_THROW(pseudo_inverse(Matrix::Identity(2, 2), SpectralTolerance{-1.0}), InvalidInput);
}

TEST(PseudoInverse, PenroseOnRankDeficientRectangles) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const Index r = 1 + t % 7, c = 1 + (t * 3) % 9;
    const Index rank = t % (std::min(r, c) + 1);
    const Matrix a = oracle::random_rank(rng, r, c, rank);
    const Matrix x = pseudo_inverse(a);
    EXPECT_LE(oracle::penrose(a, x).worst(), 1e-8) << "trial " << t;
    if (rank > 0) EXPECT_LE(rel_diff(x, oracle::pinv_cod(a)), 1e-8) << "trial " << t;
  }
}

TEST(PseudoInverse, CutoffDropsTinySingularValues) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-14;
  EXPECT_EQ(pseudo_inverse(d)(1, 1), 0.0);
  EXPECT_NEAR(pseudo_inverse(d, SpectralTolerance{1e-16})(1, 1), 1e14, 1.0);
}

TEST(SymSqrt, Examples) {
  EXPECT_LE((sym_sqrt(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2)).norm(), 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = 2;
  r(1, 1) = 3;
  EXPECT_LE((sym_sqrt(d) - r).norm(), 1e-14);
  Matrix e(2, 2);
  e << 2, 1, 1, 2;
  const Matrix s = sym_sqrt(e);
  EXPECT_LE((s * s - e).norm(), 1e-10);
  EXPECT_LE((s - s.transpose()).norm(), 0.0);
}

TEST(SymSqrt, PsdOutputOnRankDeficient) {
  std::mt19937_64 rng(3);
  const Matrix b = oracle::random_rank(rng, 6, 6, 3);
  const Matrix e = b * b.transpose();
  const Matrix s = sym_sqrt(e);
  EXPECT_LE((s * s - e).norm(), 1e-10 * e.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10 * s.norm());
}

TEST(SymSqrt, ClipsRoundingNegatives) {
  Matrix e = Matrix::Zero(2, 2);
  e(0, 0) = 1.0;
  e(1, 1) = -1e-12;
  const Matrix s = sym_sqrt(e);
  EXPECT_EQ(s(1, 1), 0.0);
}

TEST(SymSqrt, Errors) {
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  EXPECT_THROW(sym_sqrt(neg), NotPSD);
  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  EXPECT_THROW(sym_sqrt(asym), InvalidInput);
  EXPECT_THROW(sym_sqrt(Matrix::Ones(2, 3)), InvalidInput);
}

TEST(FrobNormSq, Examples) {
  EXPECT_EQ(frob_norm_sq(Matrix::Identity(3, 3)), 3.0);
  EXPECT_EQ(frob_norm_sq(Matrix::Zero(4, 2)), 0.0);
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  EXPECT_EQ(frob_norm_sq(a), 30.0);
}
