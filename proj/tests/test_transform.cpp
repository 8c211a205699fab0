#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <bgev/transform.hpp>

#include "test_support.hpp"

namespace {

TEST(Transform, OddAndInverse) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(g);
    const double sigma = 0.3 + std::fabs(u(g));
    const double delta = -0.9 + std::fabs(u(g));
    const double y = bgev::transform_forward(x, sigma, delta);
    EXPECT_DOUBLE_EQ(bgev::transform_forward(-x, sigma, delta), -y);
    EXPECT_NEAR(bgev::transform_inverse(y, sigma, delta), x, 1e-12 * (1 + std::fabs(x)));
  }
}

TEST(Transform, HandValues) {
  // sigma x |x|^delta
  EXPECT_DOUBLE_EQ(bgev::transform_forward(2.0, 1.5, 2.0), 12.0);
  EXPECT_DOUBLE_EQ(bgev::transform_forward(-2.0, 1.5, 2.0), -12.0);
  EXPECT_DOUBLE_EQ(bgev::transform_forward(3.0, 2.0, 0.0), 6.0);
  EXPECT_DOUBLE_EQ(bgev::transform_inverse(12.0, 1.5, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(bgev::transform_forward(0.0, 1.0, 0.5), 0.0);
}

TEST(Transform, DerivativesMatchFiniteDifferences) {
  for (double delta : {-0.5, 0.0, 0.7, 2.0}) {
    for (double x : {-1.7, -0.3, 0.4, 2.2}) {
      auto t = [&](double v) { return bgev::transform_forward(v, 1.3, delta); };
      auto t1 = [&](double v) { return bgev::transform_d1(v, 1.3, delta); };
      EXPECT_NEAR(bgev::transform_d1(x, 1.3, delta), oracle::derivative(t, x, 1e-4), 1e-8);
      EXPECT_NEAR(bgev::transform_d2(x, 1.3, delta), oracle::derivative(t1, x, 1e-4), 1e-7);
    }
  }
}

TEST(Transform, DerivativesAtZero) {
  EXPECT_DOUBLE_EQ(bgev::transform_d1(0.0, 2.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(bgev::transform_d1(0.0, 2.0, 1.5), 0.0);
  EXPECT_THROW((void)bgev::transform_d1(0.0, 2.0, -0.5), std::domain_error);
  EXPECT_DOUBLE_EQ(bgev::transform_d2(0.0, 2.0, 1.5), 0.0);
  EXPECT_THROW((void)bgev::transform_d2(0.0, 2.0, 0.5), std::domain_error);
}

}  // namespace
