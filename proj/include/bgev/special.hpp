#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Incomplete gamma functions in the standard convention:
//   lower(a, x) = int_0^x t^(a-1) e^-t dt,   upper(a, x) = int_x^inf t^(a-1) e^-t dt.
// Note that the BGEV moment formula in the literature writes gamma(a; x) for
// the *upper* integral and Gamma(a; x) for the *lower* one; callers translate.

namespace bgev::special {

namespace detail {

constexpr int kMaxIter = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// sum_{n>=0} x^n / (a (a+1) ... (a+n)); lower(a, x) = x^a e^-x * series
[[nodiscard]] inline double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum;
  }
  throw std::runtime_error("incomplete gamma: series did not converge");
}

// modified Lentz evaluation of the continued fraction for e^x x^-a upper(a, x)
[[nodiscard]] inline double upper_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete gamma: continued fraction did not converge");
}

inline void check_args(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("incomplete gamma: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("incomplete gamma: x must be >= 0");
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] inline double gamma_p(double a, double x) {
  detail::check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) return std::exp(log_prefix) * detail::lower_series(a, x);
  return 1.0 - std::exp(log_prefix) * detail::upper_continued_fraction(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
[[nodiscard]] inline double gamma_q(double a, double x) {
  detail::check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) return 1.0 - std::exp(log_prefix) * detail::lower_series(a, x);
  return std::exp(log_prefix) * detail::upper_continued_fraction(a, x);
}

[[nodiscard]] inline double incomplete_gamma_lower(double a, double x) {
  detail::check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::tgamma(a);
  const double prefix = std::exp(a * std::log(x) - x);
  if (x < a + 1.0) return prefix * detail::lower_series(a, x);
  return std::tgamma(a) - prefix * detail::upper_continued_fraction(a, x);
}

[[nodiscard]] inline double incomplete_gamma_upper(double a, double x) {
  detail::check_args(a, x);
  if (x == 0.0) return std::tgamma(a);
  if (std::isinf(x)) return 0.0;
  const double prefix = std::exp(a * std::log(x) - x);
  if (x < a + 1.0) return std::tgamma(a) - prefix * detail::lower_series(a, x);
  return prefix * detail::upper_continued_fraction(a, x);
}

/// Upper tail probability of the chi-squared distribution with k degrees of freedom.
[[nodiscard]] inline double chi_squared_sf(double stat, double dof) {
  if (!(dof > 0.0)) throw std::domain_error("chi_squared_sf: dof must be > 0");
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace bgev::special
