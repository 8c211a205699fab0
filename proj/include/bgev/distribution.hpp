#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gev.hpp"
#include "params.hpp"
#include "random.hpp"
#include "transform.hpp"

namespace bgev {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log Psi with Psi = 1 + xi (T(x) - mu); -inf outside the support
[[nodiscard]] inline double log_psi(double x, const BgevParams& p) {
  const double s = p.xi() * (transform_forward(x, p.sigma(), p.delta()) - p.mu());
  if (!(s > -1.0)) return -kInf;
  return std::log1p(s);
}

}  // namespace detail

[[nodiscard]] inline GevParams unit_gev(const BgevParams& p) { return {p.xi(), p.mu(), 1.0}; }

[[nodiscard]] inline Support support(const BgevParams& p) {
  const double edge = transform_inverse(p.mu() - 1.0 / p.xi(), p.sigma(), p.delta());
  if (p.xi() > 0.0) return {edge, detail::kInf, SupportKind::LeftBounded};
  return {-detail::kInf, edge, SupportKind::RightBounded};
}

/// Log density; -inf outside the support, +inf at the pole x = 0 when delta < 0.
[[nodiscard]] inline double log_pdf(double x, const BgevParams& p) {
  const double lpsi = detail::log_psi(x, p);
  if (std::isinf(lpsi)) return -detail::kInf;
  double log_jac = std::log(p.sigma()) + std::log1p(p.delta());
  if (p.delta() != 0.0) {
    if (x == 0.0) return p.delta() < 0.0 ? detail::kInf : -detail::kInf;
    log_jac += p.delta() * std::log(std::abs(x));
  }
  return log_jac - (1.0 + 1.0 / p.xi()) * lpsi - std::exp(-lpsi / p.xi());
}

/// Density f_G(T(x); xi, mu) T'(x). Returns +inf at x = 0 when -1 < delta < 0
/// and 0 lies in the support; the density is integrable there.
[[nodiscard]] inline double pdf(double x, const BgevParams& p) {
  const double lp = log_pdf(x, p);
  if (lp == -detail::kInf) return 0.0;
  return std::exp(lp);
}

[[nodiscard]] inline double cdf(double x, const BgevParams& p) {
  const double lpsi = detail::log_psi(x, p);
  if (std::isinf(lpsi)) return p.xi() > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-lpsi / p.xi()));
}

/// 1 - cdf, evaluated without cancellation in the right tail.
[[nodiscard]] inline double survival(double x, const BgevParams& p) {
  const double lpsi = detail::log_psi(x, p);
  if (std::isinf(lpsi)) return p.xi() > 0.0 ? 1.0 : 0.0;
  return -std::expm1(-std::exp(-lpsi / p.xi()));
}

/// x_q = T^-1(F_G^-1(q)). Composing with T^-1 keeps the negative branch real
/// for every delta.
[[nodiscard]] inline double quantile(double q, const BgevParams& p) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("quantile: q must lie in (0, 1)");
  return transform_inverse(gev::quantile(q, unit_gev(p)), p.sigma(), p.delta());
}

/// Draws via quantile(U) from a caller-owned generator.
[[nodiscard]] inline std::vector<double> sample(std::size_t n, const BgevParams& p, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(rng.uniform(), p));
  return out;
}

[[nodiscard]] inline std::vector<double> sample(std::size_t n, const BgevParams& p,
                                                std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  Rng rng(seed);
  return sample(n, p, rng);
}

/// Right-tail index (delta + 1) / xi; the survival function is regularly
/// varying with index -(delta + 1) / xi.
[[nodiscard]] inline double tail_index(const BgevParams& p) {
  if (!(p.xi() > 0.0)) throw std::domain_error("tail_index: right tail is not heavy for xi <= 0");
  return (p.delta() + 1.0) / p.xi();
}

}  // namespace bgev
