#pragma once

#include <cmath>
#include <stdexcept>

#include "distribution.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace bgev {

namespace detail {

[[nodiscard]] inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Parity of the integer exponent m = k (delta + 1); throws if m is not integral.
[[nodiscard]] inline int integral_exponent(int k, double delta) {
  const double m = k * (delta + 1.0);
  const double r = std::round(m);
  if (std::abs(m - r) > 1e-12 * std::max(1.0, std::abs(m))) {
    throw std::domain_error(
        "moment: X^(k(delta+1)) is not real-valued on the negative support for non-integer "
        "k(delta+1)");
  }
  return static_cast<int>(r);
}

// E[X^(k(delta+1))] by quadrature in z = Psi^(-1/xi), where the integrand is
// g(y(z)) e^-z over z in (0, inf).
[[nodiscard]] inline double moment_by_quadrature(int k, const BgevParams& p) {
  const double xi = p.xi();
  const double mu = p.mu();
  const bool has_negative = (xi < 0.0) || (mu - 1.0 / xi < 0.0);
  const int m = has_negative ? integral_exponent(k, p.delta()) : 0;
  const double neg_sign = (m % 2 == 0) ? 1.0 : -1.0;
  auto integrand = [&](double z) {
    if (z <= 0.0) return 0.0;
    const double y = mu + std::expm1(-xi * std::log(z)) / xi;
    const double mag = std::pow(std::abs(y) / p.sigma(), k);
    const double v = (y < 0.0 ? neg_sign : 1.0) * mag * std::exp(-z);
    return std::isfinite(v) ? v : 0.0;
  };
  const double c = 1.0 - xi * mu;
  double total = 0.0;
  if (c > 0.0) {
    const double z0 = std::exp(-std::log(c) / xi);
    total += quad::integrate(integrand, 0.0, z0, 1e-12, 0.0).value;
    total += quad::integrate(integrand, z0, std::numeric_limits<double>::infinity(), 1e-12, 0.0)
                 .value;
  } else {
    total = quad::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-12, 0.0)
                .value;
  }
  return total;
}

}  // namespace detail

/// E[X^(k(delta+1))] for X ~ BGEV(xi, mu, sigma, delta), requiring xi < 1/k.
///
/// For xi > 0 the closed form in incomplete gamma functions is used, with
/// z0 = (1 - xi mu)^(-1/xi) splitting the negative and positive parts of the
/// support when mu - 1/xi < 0. For xi < 0 the moment is computed by quadrature.
[[nodiscard]] inline double moment(int k, const BgevParams& p) {
  if (k < 1) throw std::domain_error("moment: k must be a positive integer");
  const double xi = p.xi();
  if (!(xi < 1.0 / k)) throw std::domain_error("moment: requires xi < 1/k");
  if (xi < 0.0) return detail::moment_by_quadrature(k, p);

  const double c = xi * p.mu() - 1.0;
  const double scale = std::pow(xi * p.sigma(), -k);
  if (p.mu() - 1.0 / xi >= 0.0) {
    double sum = 0.0;
    for (int i = 0; i <= k; ++i) {
      sum += detail::binomial(k, i) * std::pow(c, k - i) * std::tgamma(1.0 - xi * i);
    }
    return scale * sum;
  }
  // Negative part of the support carries x^m = (-1)^m |x|^m and y^k already
  // contributes (-1)^k, hence the combined sign (-1)^(m + k).
  const int m = detail::integral_exponent(k, p.delta());
  const double neg_sign = ((m + k) % 2 == 0) ? 1.0 : -1.0;
  const double z0 = std::exp(-std::log(-c) / xi);
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double a = 1.0 - xi * i;
    const double w = detail::binomial(k, i) * std::pow(c, k - i);
    sum += w * (neg_sign * special::incomplete_gamma_upper(a, z0) +
                special::incomplete_gamma_lower(a, z0));
  }
  return scale * sum;
}

}  // namespace bgev
