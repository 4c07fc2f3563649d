#include <gtest/gtest.h>

#include "iflt/baselines.hpp"
#include "iflt/error_analysis.hpp"
#include "oracles.hpp"

using namespace iflt;

TEST(Wiener, IdentityAndOrthogonal) {
  std::mt19937_64 rng(1);
  const Ensemble y = oracle::random_centered(rng, 4, 50);
  EXPECT_LE((wiener_fit(y, y).t - Matrix::Identity(4, 4)).norm(), 1e-10);
  Matrix a(1, 4), b(1, 4);
  a << 1, -1, 1, -1;
  b << 1, 1, -1, -1;
  EXPECT_EQ(wiener_fit(Ensemble::from_centered(a), Ensemble::from_centered(b)).t.norm(), 0.0);
}

TEST(Wiener, ApplyExamples) {
  std::mt19937_64 rng(2);
  const Ensemble y = oracle::random_centered(rng, 3, 8);
  EXPECT_EQ(wiener_apply({Matrix::Identity(3, 3)}, y).data(), y.data());
  EXPECT_EQ(wiener_apply({Matrix::Zero(2, 3)}, y).data(), Matrix::Zero(2, 8));
  const Matrix t1 = oracle::gaussian(rng, 3, 3), t2 = oracle::gaussian(rng, 2, 3);
  EXPECT_LE(rel_diff(wiener_apply({t2}, wiener_apply({t1}, y)).data(), wiener_apply({t2 * t1}, y).data()), 1e-12);
  EXPECT_THROW(wiener_apply({Matrix::Zero(2, 2)}, y), InvalidInput);
}

TEST(Wiener, BeatsRandomPerturbations) {
  std::mt19937_64 rng(3);
  const Ensemble y = oracle::random_centered(rng, 4, 60);
  const Ensemble x = transform(oracle::gaussian(rng, 3, 4), y) + 0.3 * oracle::random_centered(rng, 3, 60);
  const WienerModel w = wiener_fit(x, y);
  const double best = empirical_error(x, wiener_apply(w, y));
  for (int t = 0; t < 100; ++t) {
    const Matrix dt = 1e-3 * oracle::gaussian(rng, 3, 4);
    EXPECT_GE(empirical_error(x, wiener_apply({w.t + dt}, y)), best);
  }
}

TEST(Rls, InitValidation) {
  EXPECT_THROW(rls_init(0, 1, 1.0, 1.0), InvalidInput);
  EXPECT_THROW(rls_init(2, 2, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(rls_init(2, 2, 1.5, 1.0), InvalidInput);
  EXPECT_THROW(rls_init(2, 2, 1.0, 0.0), InvalidInput);
  const RlsState s = rls_init(3, 2, 0.9, 5.0);
  EXPECT_EQ(s.p_inv_corr, 5.0 * Matrix::Identity(3, 3));
  EXPECT_EQ(s.weights, Matrix::Zero(2, 3));
}

TEST(Rls, ZeroColumnOnlyCountsStep) {
  const RlsState s0 = rls_init(3, 2, 1.0, 2.0);
  const RlsState s1 = rls_step(s0, Vector::Zero(3), Vector::Zero(2));
  EXPECT_EQ(s1.weights, s0.weights);
  EXPECT_EQ(s1.p_inv_corr, s0.p_inv_corr);
  EXPECT_EQ(s1.steps, 1u);
}

TEST(Rls, OneStepHandExpansion) {
  // P_1 = P_0 - P_0 y y^T P_0 / (1 + y^T P_0 y) with P_0 = delta I and |y| = 1.
  const double delta = 0.25;
  Vector y(3);
  y << 0.6, 0.0, 0.8;
  Vector x(1);
  x << 2.0;
  const RlsState s = rls_step(rls_init(3, 1, 1.0, delta), y, x);
  const Matrix expected = delta * (Matrix::Identity(3, 3) - delta * y * y.transpose() / (1.0 + delta));
  EXPECT_LE((s.p_inv_corr - expected).norm(), 1e-15);
  EXPECT_LE((s.weights - x * (delta * y / (1.0 + delta)).transpose()).norm(), 1e-15);
}

TEST(Rls, MatchesRegularisedClosedForm) {
  std::mt19937_64 rng(4);
  const Ensemble y = oracle::random_centered(rng, 4, 30);
  const Ensemble x = oracle::random_centered(rng, 2, 30);
  for (double delta : {0.1, 1.0, 10.0}) {
    const RlsState s = rls_fit(x, y, 1.0, delta);
    EXPECT_LE(rel_diff(s.weights, oracle::ridge(x.data(), y.data(), 1.0 / delta)), 1e-9) << delta;
  }
}

TEST(Rls, LargeDeltaApproachesLeastSquares) {
  std::mt19937_64 rng(5);
  const Ensemble y = oracle::random_centered(rng, 5, 200);
  const Ensemble x = transform(oracle::gaussian(rng, 3, 5), y) + 0.1 * oracle::random_centered(rng, 3, 200);
  const RlsState s = rls_fit(x, y, 1.0, 1e8);
  EXPECT_LE(rel_diff(s.weights, oracle::least_squares(x.data(), y.data())), 1e-4);
}

TEST(Rls, ForgettingTracksRecentData) {
  std::mt19937_64 rng(6);
  const Matrix t_old = oracle::gaussian(rng, 1, 2), t_new = oracle::gaussian(rng, 1, 2);
  RlsState s = rls_init(2, 1, 0.9, 100.0);
  for (int r = 0; r < 400; ++r) {
    const Vector y = oracle::gaussian(rng, 2, 1);
    rls_update(s, y, (r < 200 ? t_old : t_new) * y);
  }
  EXPECT_LE(rel_diff(s.weights, t_new), 1e-6);
}

TEST(Rls, DimensionErrors) {
  RlsState s = rls_init(2, 1, 1.0, 1.0);
  EXPECT_THROW(rls_update(s, Vector::Zero(3), Vector::Zero(1)), InvalidInput);
  EXPECT_THROW(rls_update(s, Vector::Zero(2), Vector::Zero(2)), InvalidInput);
}
