#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <bgev/pipeline.hpp>

#include "test_support.hpp"

namespace {

namespace pl = bgev::pipeline;
using bgev::BgevParams;

pl::SeriesFile parse(const std::string& text, pl::ColumnSelector sel = {},
                     pl::MissingPolicy policy = pl::MissingPolicy::Skip) {
  std::istringstream in(text);
  return pl::ingest_stream(in, "mem", sel, policy);
}

TEST(Ingest, TwoColumnWithHeader) {
  std::string text = "time,value\n";
  for (int i = 1; i <= 10; ++i) text += "2021-01-01T" + std::string(i < 10 ? "0" : "") +
                                        std::to_string(i) + ":00," + std::to_string(i * 1.5) + "\n";
  const auto s = parse(text);
  EXPECT_EQ(s.values.size(), 10u);
  EXPECT_EQ(s.timestamps.front(), "2021-01-01T01:00");
  EXPECT_EQ(s.value_column, "value");
  EXPECT_TRUE(s.has_timestamps);
  EXPECT_DOUBLE_EQ(s.values[3], 6.0);
}

TEST(Ingest, MissingValues) {
  const std::string text = "t,v\n1,1\n2,\n3,3\n4,NA\n5,5\n6,6\n7,7\n8,8\n9,9\n10,10\n";
  const auto s = parse(text);
  EXPECT_EQ(s.values.size(), 8u);
  EXPECT_EQ(s.skipped, 2u);
  EXPECT_THROW((void)parse(text, {}, pl::MissingPolicy::Fail), pl::InputError);
}

TEST(Ingest, HeaderlessSingleColumn) {
  const auto s = parse("1.5\n2.5\n-3\n");
  EXPECT_EQ(s.values, (std::vector<double>{1.5, 2.5, -3.0}));
  EXPECT_FALSE(s.has_timestamps);
  EXPECT_EQ(s.timestamps, (std::vector<std::string>{"1", "2", "3"}));
}

TEST(Ingest, TabsAndColumnSelection) {
  const auto s = parse("a\tb\tc\n1\t10\t100\n2\t20\t200\n", {"b", ""});
  EXPECT_EQ(s.values, (std::vector<double>{10.0, 20.0}));
  const auto t = parse("a\tb\tc\n1\t10\t100\n2\t20\t200\n", {"2", ""});
  EXPECT_EQ(t.values, s.values);
  EXPECT_THROW((void)parse("a,b\n1,2\n", {"zzz", ""}), pl::InputError);
}

TEST(Ingest, Errors) {
  EXPECT_THROW((void)parse(""), pl::InputError);
  EXPECT_THROW((void)parse("a,b\nx,y\nz,w\n"), pl::InputError);
  EXPECT_THROW((void)parse("t,v\n2,1\n1,2\n"), pl::InputError);  // timestamps go backwards
  EXPECT_THROW((void)pl::ingest("/nonexistent/file.csv"), pl::InputError);
}

TEST(BlockMaxima, Basic) {
  std::vector<double> v(48);
  for (int i = 0; i < 48; ++i) v[i] = i + 1;
  const auto b = pl::block_maxima(v, 24);
  EXPECT_EQ(b.maxima, (std::vector<double>{24, 48}));
  EXPECT_EQ(b.dropped, 0u);
  EXPECT_EQ(pl::block_maxima(v, 1).maxima, v);
  v.push_back(100);
  v.push_back(101);
  const auto c = pl::block_maxima(v, 24);
  EXPECT_EQ(c.maxima.size(), 2u);
  EXPECT_EQ(c.dropped, 2u);
  EXPECT_THROW((void)pl::block_maxima(v, 100), pl::InputError);
  EXPECT_THROW((void)pl::block_maxima(v, 0), pl::InputError);
}

TEST(Standardize, SampleSdConvention) {
  pl::BlockMaxima b;
  b.maxima = {0.0, 2.0};
  const auto s = pl::standardize(b);
  EXPECT_NEAR(s.maxima[0], -std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(s.maxima[1], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(s.mean, 1.0, 1e-15);
  EXPECT_NEAR(s.sd, std::sqrt(2.0), 1e-15);
}

TEST(Standardize, ExactMomentsAndIdempotence) {
  pl::BlockMaxima b;
  b.maxima = bgev::sample(365, BgevParams(0.2, 3.0, 0.5, 1.0), 8);
  const auto s = pl::standardize(b);
  double m = 0.0, ss = 0.0;
  for (double v : s.maxima) m += v;
  m /= s.maxima.size();
  for (double v : s.maxima) ss += (v - m) * (v - m);
  EXPECT_LT(std::fabs(m), 1e-12);
  EXPECT_LT(std::fabs(std::sqrt(ss / (s.maxima.size() - 1)) - 1.0), 1e-12);
  // metadata maps back to the originals
  for (std::size_t i = 0; i < b.maxima.size(); ++i) {
    EXPECT_NEAR(s.mean + s.sd * s.maxima[i], b.maxima[i], 1e-12 * (1 + std::fabs(b.maxima[i])));
  }
  const auto twice = pl::standardize(s);
  for (std::size_t i = 0; i < s.maxima.size(); ++i) EXPECT_NEAR(twice.maxima[i], s.maxima[i], 1e-12);
  pl::BlockMaxima flat;
  flat.maxima = {2.0, 2.0, 2.0};
  EXPECT_THROW((void)pl::standardize(flat), pl::InputError);
}

TEST(FitAndCompare, BimodalDataFavoursBgev) {
  const auto x = bgev::sample(365, BgevParams(-0.25, -0.375, 1.0, 2.0), 2024);
  const auto r = pl::fit_and_compare(x, pl::preset_start(pl::StartPreset::Auto, x),
                                     pl::preset_gev_start(pl::StartPreset::Auto, x));
  EXPECT_TRUE(r.bgev.converged);
  EXPECT_TRUE(r.gev.converged);
  EXPECT_LT(r.bgev.neg2loglik, r.gev.neg2loglik);
  EXPECT_LT(r.bgev.ks, r.gev.ks);
  EXPECT_EQ(r.gev.delta, 0.0);
  EXPECT_EQ(r.ks_winner, pl::Winner::Bgev);
  ASSERT_TRUE(r.ljung_box.has_value());
}

TEST(FitAndCompare, GevDataGivesSmallDelta) {
  const bgev::GevParams g(0.1, 0.0, 1.0);
  bgev::Rng rng(11);
  std::vector<double> x(1000);
  for (double& v : x) v = bgev::gev::quantile(rng.uniform(), g);
  const auto r = pl::fit_and_compare(x, pl::preset_start(pl::StartPreset::Auto, x),
                                     pl::preset_gev_start(pl::StartPreset::Auto, x));
  EXPECT_LE(r.bgev.neg2loglik, r.gev.neg2loglik + 1e-6);
  EXPECT_LT(r.gev.neg2loglik - r.bgev.neg2loglik, 10.0);
  EXPECT_LT(std::fabs(r.bgev.delta), 0.3);
}

TEST(FitAndCompare, ReportShape) {
  const auto x = bgev::sample(200, BgevParams(0.3, 0.2, 1.0, 1.0), 5);
  const auto r = pl::fit_and_compare(x, BgevParams(-0.5, 0.0, 1.0, 0.5), {-0.5, 0.0, 1.0});
  const auto csv = pl::render_report_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("model,xi,mu,sigma,delta,ks,ad,neg2loglik,converged\n", 0), 0u);
  EXPECT_TRUE(std::isfinite(r.bgev.ks) && std::isfinite(r.bgev.ad) &&
              std::isfinite(r.bgev.neg2loglik));
  EXPECT_TRUE(std::isfinite(r.gev.ks) && std::isfinite(r.gev.ad) && std::isfinite(r.gev.neg2loglik));
}

TEST(PlotData, DensityCurveAndQQ) {
  const auto x = bgev::sample(365, BgevParams(-0.25, -0.375, 1.0, 2.0), 77);
  const auto r = pl::fit_and_compare(x, pl::preset_start(pl::StartPreset::Auto, x),
                                     pl::preset_gev_start(pl::StartPreset::Auto, x));
  const auto pd = pl::make_plot_data(r, x);
  EXPECT_EQ(pd.bins, pl::freedman_diaconis_bins(x));

  // trapezoid over the 512-point grid against the fitted mass on [lo, hi]
  std::istringstream in(pd.density);
  std::string line;
  std::getline(in, line);
  std::vector<double> gx, gb, gg;
  while (std::getline(in, line)) {
    double a, b, c;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c), 3);
    gx.push_back(a);
    gb.push_back(b);
    gg.push_back(c);
  }
  ASSERT_EQ(gx.size(), 512u);
  double tb = 0.0, tg = 0.0;
  for (std::size_t i = 1; i < gx.size(); ++i) {
    tb += 0.5 * (gb[i] + gb[i - 1]) * (gx[i] - gx[i - 1]);
    tg += 0.5 * (gg[i] + gg[i - 1]) * (gx[i] - gx[i - 1]);
  }
  const double mb = bgev::cdf(pd.hi, *r.bgev_params) - bgev::cdf(pd.lo, *r.bgev_params);
  const double mg = bgev::gev::cdf(pd.hi, *r.gev_params) - bgev::gev::cdf(pd.lo, *r.gev_params);
  EXPECT_NEAR(tb, mb, 0.01);
  EXPECT_NEAR(tg, mg, 0.01);

  EXPECT_EQ(std::count(pd.qq_bgev.begin(), pd.qq_bgev.end(), '\n'), 366);
  EXPECT_EQ(std::count(pd.qq_gev.begin(), pd.qq_gev.end(), '\n'), 366);
  // deterministic
  const auto again = pl::make_plot_data(r, x);
  EXPECT_EQ(again.histogram, pd.histogram);
  EXPECT_EQ(again.density, pd.density);
  // histogram counts add up
  const auto custom = pl::make_plot_data(r, x, 7);
  EXPECT_EQ(custom.bins, 7u);
}

TEST(PlotData, FreedmanDiaconis) {
  std::vector<double> v(1000);
  for (int i = 0; i < 1000; ++i) v[i] = i;
  // IQR 499.5, h = 999 / 10 = 99.9, range 999 -> 10 bins
  EXPECT_EQ(pl::freedman_diaconis_bins(v), 10u);
  EXPECT_EQ(pl::freedman_diaconis_bins(std::vector<double>{1, 1, 1, 1}), 1u);
}

}  // namespace
