#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <bgev/gof.hpp>
#include <bgev/random.hpp>

#include "test_support.hpp"

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

TEST(Ks, HandCases) {
  // n = 1: D = max(1 - F, F)
  EXPECT_DOUBLE_EQ(bgev::gof::ks_statistic(std::vector<double>{0.3}, uniform_cdf), 0.7);
  // n = 3, points at 0.1 0.5 0.9: gaps 1/3 - 0.1, 0.5 - 1/3, 2/3 - 0.5, 1 - 0.9, ...
  const std::vector<double> x{0.9, 0.1, 0.5};
  EXPECT_NEAR(bgev::gof::ks_statistic(x, uniform_cdf), 0.2333333333333333, 1e-15);
  for (const auto& v : std::vector<std::vector<double>>{
           {0.2, 0.4}, {0.05, 0.5, 0.95}, {0.1, 0.15, 0.7, 0.8}, {0.01, 0.3, 0.31, 0.6, 0.99}}) {
    EXPECT_DOUBLE_EQ(bgev::gof::ks_statistic(v, uniform_cdf), oracle::brute_ks(v, uniform_cdf));
  }
}

TEST(Ad, HandCases) {
  // n = 1 at u: A^2 = -1 - ln u - ln(1 - u)
  EXPECT_NEAR(bgev::gof::ad_statistic(std::vector<double>{0.3}, uniform_cdf),
              -1.0 - std::log(0.3) - std::log(0.7), 1e-15);
  for (const auto& v : std::vector<std::vector<double>>{
           {0.2, 0.4}, {0.05, 0.5, 0.95}, {0.1, 0.15, 0.7, 0.8}, {0.01, 0.3, 0.31, 0.6, 0.99}}) {
    EXPECT_NEAR(bgev::gof::ad_statistic(v, uniform_cdf), oracle::brute_ad(v, uniform_cdf), 1e-14);
  }
}

TEST(Ad, BoundaryError) {
  const std::vector<double> x{0.2, 1.5, 0.5};
  try {
    (void)bgev::gof::ad_statistic(x, uniform_cdf);
    FAIL() << "expected BoundaryError";
  } catch (const bgev::gof::BoundaryError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(Gof, EmptyAndNonFinite) {
  EXPECT_THROW((void)bgev::gof::ks_statistic(std::vector<double>{}, uniform_cdf),
               std::invalid_argument);
  EXPECT_THROW((void)bgev::gof::ks_statistic(std::vector<double>{0.1, NAN}, uniform_cdf),
               std::invalid_argument);
}

TEST(LjungBox, RejectsPeriodic) {
  std::vector<double> x(200);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2 * M_PI * t / 12.0);
  const auto r = bgev::gof::ljung_box(x, 10);
  EXPECT_LT(r.p_value, 1e-6);
  EXPECT_EQ(r.lags, 10);
}

TEST(LjungBox, AcceptsNoise) {
  int accepted = 0;
  for (int s = 0; s < 100; ++s) {
    bgev::Rng rng(bgev::derive_seed(555, s));
    std::vector<double> x(365);
    for (double& v : x) v = rng.normal();
    accepted += bgev::gof::ljung_box(x, 10).p_value >= 0.01;
  }
  EXPECT_GE(accepted, 95);
}

TEST(LjungBox, HandComputed) {
  // x = 1, 2, 3, 4, 5, 6: mean 3.5, c0 = 17.5, c1 = 8.75 -> rho1 = 0.5
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const auto rho = bgev::gof::autocorrelations(x, 1);
  EXPECT_NEAR(rho[0], 0.5, 1e-15);
  EXPECT_NEAR(bgev::gof::ljung_box(x, 1).statistic, 6.0 * 8.0 * 0.25 / 5.0, 1e-12);
  EXPECT_THROW((void)bgev::gof::ljung_box(x, 3), std::invalid_argument);
  EXPECT_THROW((void)bgev::gof::ljung_box(std::vector<double>(10, 1.0), 2), std::invalid_argument);
}

TEST(QQ, HazenPositions) {
  const std::vector<double> x{3.0, 1.0, 2.0, 4.0};
  const auto qq = bgev::gof::qq_pairs(x, [](double p) { return p; });
  ASSERT_EQ(qq.size(), 4u);
  EXPECT_DOUBLE_EQ(qq[0].theoretical, 0.125);
  EXPECT_DOUBLE_EQ(qq[3].theoretical, 0.875);
  EXPECT_DOUBLE_EQ(qq[2].empirical, 3.0);
  // Weibull positions i / (n + 1)
  const auto w = bgev::gof::qq_pairs(x, [](double p) { return p; }, 0.0);
  EXPECT_DOUBLE_EQ(w[0].theoretical, 0.2);
}

}  // namespace
