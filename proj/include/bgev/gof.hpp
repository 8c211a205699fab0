#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "special.hpp"

namespace bgev::gof {

struct QQPair {
  double theoretical;
  double empirical;
};

struct GofReport {
  double ks = 0.0;
  double ad = 0.0;
  std::size_t n = 0;
  std::vector<QQPair> qq;
};

struct LjungBoxReport {
  double statistic = 0.0;
  int lags = 0;
  double p_value = 1.0;
};

/// Anderson-Darling needs F strictly inside (0, 1) at every order statistic.
class BoundaryError : public std::domain_error {
 public:
  BoundaryError(const std::string& what, std::size_t index)
      : std::domain_error(what), index_(index) {}
  /// Position of the offending observation in sorted order.
  [[nodiscard]] std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

namespace detail {

[[nodiscard]] inline std::vector<double> sorted_finite(std::span<const double> x,
                                                       const char* who) {
  if (x.empty()) throw std::invalid_argument(std::string(who) + ": empty sample");
  std::vector<double> v(x.begin(), x.end());
  for (double a : v) {
    if (!std::isfinite(a)) throw std::invalid_argument(std::string(who) + ": non-finite value");
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

/// Kolmogorov-Smirnov distance D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
template <class Cdf>
[[nodiscard]] double ks_statistic(std::span<const double> x, const Cdf& cdf) {
  const auto v = detail::sorted_finite(x, "ks_statistic");
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Anderson-Darling A^2 = -n - (1/n) sum (2i - 1)[ln F(x_(i)) + ln(1 - F(x_(n+1-i)))].
template <class Cdf>
[[nodiscard]] double ad_statistic(std::span<const double> x, const Cdf& cdf) {
  const auto v = detail::sorted_finite(x, "ad_statistic");
  const std::size_t n = v.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = cdf(v[i]);
    if (!(f[i] > 0.0 && f[i] < 1.0)) {
      throw BoundaryError("ad_statistic: F(x) = " + std::to_string(f[i]) + " at order statistic " +
                              std::to_string(i + 1) + " (x = " + std::to_string(v[i]) + ")",
                          i);
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += (2.0 * i + 1.0) * (std::log(f[i]) + std::log1p(-f[n - 1 - i]));
  }
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

/// Lag-k sample autocorrelations rho_1..rho_h (denominator: total sum of squares).
[[nodiscard]] inline std::vector<double> autocorrelations(std::span<const double> x, int lags) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double a : x) mean += a;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double a : x) c0 += (a - mean) * (a - mean);
  if (!(c0 > 0.0)) throw std::invalid_argument("autocorrelations: series has zero variance");
  std::vector<double> rho(lags);
  for (int k = 1; k <= lags; ++k) {
    double ck = 0.0;
    for (std::size_t t = k; t < n; ++t) ck += (x[t] - mean) * (x[t - k] - mean);
    rho[k - 1] = ck / c0;
  }
  return rho;
}

/// Ljung-Box portmanteau test, Q = n (n + 2) sum_k rho_k^2 / (n - k) ~ chi2(h).
[[nodiscard]] inline LjungBoxReport ljung_box(std::span<const double> x, int lags = 10) {
  const std::size_t n = x.size();
  if (lags < 1) throw std::invalid_argument("ljung_box: lags must be >= 1");
  if (!(2.0 * lags < static_cast<double>(n))) {
    throw std::invalid_argument("ljung_box: lags must be < n / 2");
  }
  const auto rho = autocorrelations(x, lags);
  const double nn = static_cast<double>(n);
  double q = 0.0;
  for (int k = 1; k <= lags; ++k) q += rho[k - 1] * rho[k - 1] / (nn - k);
  q *= nn * (nn + 2.0);
  return {q, lags, special::chi_squared_sf(q, lags)};
}

/// QQ pairs (quantile(p_i), x_(i)) with Hazen plotting positions p_i = (i - 0.5) / n
/// by default; `offset` a gives p_i = (i - a) / (n + 1 - 2a).
template <class Quantile>
[[nodiscard]] std::vector<QQPair> qq_pairs(std::span<const double> x, const Quantile& quantile,
                                           double offset = 0.5) {
  if (x.size() < 2) throw std::invalid_argument("qq_pairs: need at least 2 observations");
  const auto v = detail::sorted_finite(x, "qq_pairs");
  const double n = static_cast<double>(v.size());
  std::vector<QQPair> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = (i + 1 - offset) / (n + 1.0 - 2.0 * offset);
    out.push_back({quantile(p), v[i]});
  }
  return out;
}

template <class Cdf, class Quantile>
[[nodiscard]] GofReport evaluate(std::span<const double> x, const Cdf& cdf,
                                 const Quantile& quantile) {
  GofReport r;
  r.n = x.size();
  r.ks = ks_statistic(x, cdf);
  r.ad = ad_statistic(x, cdf);
  if (x.size() >= 2) r.qq = qq_pairs(x, quantile);
  return r;
}

}  // namespace bgev::gof
