#include <gtest/gtest.h>

#include <wsym/linalg.hpp>
#include <wsym/quadrature.hpp>
#include <wsym/rk4.hpp>

#include "test_helpers.hpp"

using namespace wsym;

TEST(Linalg, NumericalRankAndNullSpace) {
  Mat a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  EXPECT_EQ(numerical_rank(a), 1);
  const Mat n = null_space(a);
  EXPECT_EQ(n.cols(), 2);
  EXPECT_LT((a * n).norm(), 1e-12);
  EXPECT_LT((n.transpose() * n - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(Linalg, NullSpaceOfEmptyRowsIsEverything) {
  const Mat n = null_space(Mat(0, 3));
  EXPECT_TRUE(n.isApprox(Mat::Identity(3, 3)));
}

TEST(Linalg, IntersectionAndSumOfCoordinatePlanes) {
  const Mat i3 = Mat::Identity(3, 3);
  const Mat xy = i3.leftCols(2);
  const Mat yz = i3.rightCols(2);
  const Mat cap = subspace_intersection(xy, yz);
  ASSERT_EQ(cap.cols(), 1);
  EXPECT_NEAR(std::abs(cap(1, 0)), 1.0, 1e-12);
  EXPECT_EQ(subspace_sum(xy, yz).cols(), 3);
}

TEST(Linalg, ContainmentIsBasisIndependent) {
  Rng rng(3);
  const Mat b = random_gaussian(rng, 6, 3);
  const Mat mixed = b * random_gaussian(rng, 3, 3);
  EXPECT_TRUE(subspaces_equal(b, mixed));
  EXPECT_TRUE(subspace_contains(b, b.col(0)));
  EXPECT_FALSE(subspace_contains(b, random_gaussian(rng, 6, 1)));
}

TEST(Linalg, SeededRandomnessIsReproducible) {
  Rng a(42);
  Rng b(42);
  EXPECT_EQ(random_gaussian(a, 5), random_gaussian(b, 5));
  Rng c(1);
  const Vec u = random_unit(c, 7);
  EXPECT_NEAR(u.norm(), 1.0, 1e-15);
  for (int i = 0; i < 1000; ++i) {
    const double x = random_uniform(c);
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}

TEST(Quadrature, MatchesReferenceNodes) {
  const QuadratureRule r = gauss_legendre(5, 0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.nodes[i], oracle::kGauss5Nodes01[i], 1e-14);
    EXPECT_NEAR(r.weights[i], oracle::kGauss5Weights01[i], 1e-14);
  }
}

TEST(Quadrature, ExactForPolynomialsUpToDegree2nMinus1) {
  const QuadratureRule r = gauss_legendre(16, 0.0, 1.0);
  for (int p = 0; p <= 31; ++p) {
    const double v = r.integrate([p](double s) { return std::pow(s, p); });
    EXPECT_NEAR(v, 1.0 / (p + 1), 1e-14) << "degree " << p;
  }
}

TEST(Rk4, FourthOrderOnLinearOde) {
  const auto f = [](double, const Vec& x) { return Vec(-x); };
  Vec x0(1);
  x0 << 1.0;
  const double e1 = std::abs(rk4_integrate(f, x0, 0.0, 1.0, 10)(0) - std::exp(-1.0));
  const double e2 = std::abs(rk4_integrate(f, x0, 0.0, 1.0, 20)(0) - std::exp(-1.0));
  EXPECT_GT(e1 / e2, 14.0);
  EXPECT_LT(e1 / e2, 18.0);
}

TEST(Rk4, BackwardIntegrationInvertsForward) {
  const auto f = [](double t, const Vec& x) { return Vec(Vec::Constant(1, std::sin(t) * x(0))); };
  Vec x0(1);
  x0 << 0.7;
  const Vec y = rk4_integrate(f, x0, 0.0, 1.0, 200);
  const Vec back = rk4_integrate(f, y, 1.0, 0.0, 200);
  EXPECT_NEAR(back(0), 0.7, 1e-10);
}
