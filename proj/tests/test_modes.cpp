#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <bgev/distribution.hpp>
#include <bgev/modes.hpp>

#include "test_support.hpp"

namespace {

using bgev::BgevParams;
using bgev::Modality;

int scan_modes(const BgevParams& p) { return oracle::scan_modes(p, 10000); }

TEST(CriticalPoints, PaperPair) {
  const auto uni = bgev::critical_points(BgevParams(2.0, 0.5, 1.0, 2.0));
  EXPECT_EQ(uni.classification, Modality::Unimodal);
  const auto bi = bgev::critical_points(BgevParams(0.5, 0.5, 1.0, 2.0));
  EXPECT_EQ(bi.classification, Modality::Bimodal);
  EXPECT_EQ(bi.modes.size(), 2u);
  EXPECT_LT(bi.modes[0], 0.0);
  EXPECT_GT(bi.modes[1], 0.0);
}

TEST(CriticalPoints, AtMostThreeAndMatchesGridScan) {
  for (double inv_xi : {2.0, 4.0}) {
    for (double delta : {2.0, 4.0}) {
      for (double mu : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5}) {
        const BgevParams p(1.0 / inv_xi, mu, 1.0, delta);
        const auto cp = bgev::critical_points(p);
        EXPECT_LE(cp.points.size(), 3u) << bgev::to_string(p);
        const int scanned = scan_modes(p);
        const auto expect = scanned == 1 ? Modality::Unimodal : Modality::Bimodal;
        EXPECT_EQ(cp.classification, expect) << bgev::to_string(p) << " scan=" << scanned;
      }
    }
  }
}

TEST(CriticalPoints, AreStationary) {
  std::mt19937_64 g(31);
  for (int r = 0; r < 40; ++r) {
    const auto p = oracle::random_params(g, {.delta_lo = 0.2});
    const auto cp = bgev::critical_points(p);
    for (double x : cp.points) {
      if (x == 0.0) continue;
      const double h = 1e-6 * std::max(1.0, std::fabs(x));
      const double d = oracle::derivative([&](double v) { return bgev::pdf(v, p); }, x, h);
      const double scale = bgev::pdf(x, p) / std::max(std::fabs(x), 1e-3);
      EXPECT_LT(std::fabs(d), 1e-5 * std::max(scale, 1e-3)) << bgev::to_string(p) << " x=" << x;
    }
  }
}

TEST(CriticalPoints, RandomAgreementWithScan) {
  std::mt19937_64 g(37);
  int checked = 0;
  for (int r = 0; r < 60; ++r) {
    const auto p = oracle::random_params(g, {.xi_abs_lo = 0.15, .xi_abs_hi = 0.9, .delta_lo = 0.3});
    const auto cp = bgev::critical_points(p);
    const int scanned = scan_modes(p);
    if (scanned == 0) continue;  // maximum at a boundary of the scan window
    EXPECT_EQ(static_cast<int>(cp.modes.size()), scanned) << bgev::to_string(p);
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(CriticalPoints, PoleCountsAsMode) {
  const auto cp = bgev::critical_points(BgevParams(0.3, 0.5, 1.0, -0.5));
  EXPECT_NE(std::find(cp.modes.begin(), cp.modes.end(), 0.0), cp.modes.end());
}

TEST(CriticalPoints, DeltaZeroIsGevMode) {
  const BgevParams p(0.3, 0.2, 2.0, 0.0);
  const auto cp = bgev::critical_points(p);
  ASSERT_EQ(cp.classification, Modality::Unimodal);
  const double expect = (0.2 + (std::pow(1.3, -0.3) - 1.0) / 0.3) / 2.0;
  EXPECT_NEAR(cp.modes[0], expect, 1e-9);
}

TEST(CriticalPoints, PositiveDeltaWithZeroInsideIsBimodal) {
  std::mt19937_64 g(41);
  for (int r = 0; r < 30; ++r) {
    const auto p = oracle::random_params(g, {.delta_lo = 0.1});
    if (!bgev::support(p).contains(0.0)) continue;
    EXPECT_EQ(bgev::critical_points(p).classification, Modality::Bimodal) << bgev::to_string(p);
  }
}

}  // namespace
