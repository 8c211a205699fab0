#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "params.hpp"

// Baseline GEV distribution (xi != 0). The unit-scale form F_G(y; xi, mu) is
// the general form with sigma = 1.

namespace bgev::gev {

namespace detail {
// z = [1 + xi (y - mu) / sigma], returns NaN-free log(z) or -inf outside support
[[nodiscard]] inline double log_psi(double y, double xi, double mu, double sigma) {
  const double s = xi * (y - mu) / sigma;
  if (!(s > -1.0)) return -std::numeric_limits<double>::infinity();
  return std::log1p(s);
}
}  // namespace detail

[[nodiscard]] inline double log_pdf(double y, const GevParams& p) {
  const double lz = detail::log_psi(y, p.xi(), p.mu(), p.sigma());
  if (std::isinf(lz)) return -std::numeric_limits<double>::infinity();
  const double t = std::exp(-lz / p.xi());
  return -std::log(p.sigma()) - (1.0 / p.xi() + 1.0) * lz - t;
}

[[nodiscard]] inline double pdf(double y, const GevParams& p) {
  const double lz = detail::log_psi(y, p.xi(), p.mu(), p.sigma());
  if (std::isinf(lz)) {
    // upper endpoint of xi < -1 has an unbounded density; report 0 outside
    return 0.0;
  }
  return std::exp(log_pdf(y, p));
}

[[nodiscard]] inline double cdf(double y, const GevParams& p) {
  const double lz = detail::log_psi(y, p.xi(), p.mu(), p.sigma());
  if (std::isinf(lz)) return p.xi() > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-lz / p.xi()));
}

[[nodiscard]] inline double survival(double y, const GevParams& p) {
  const double lz = detail::log_psi(y, p.xi(), p.mu(), p.sigma());
  if (std::isinf(lz)) return p.xi() > 0.0 ? 1.0 : 0.0;
  return -std::expm1(-std::exp(-lz / p.xi()));
}

[[nodiscard]] inline double quantile(double q, const GevParams& p) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("gev::quantile: q must lie in (0, 1)");
  // ((-ln q)^(-xi) - 1) / xi, written with expm1 for small |xi|
  const double w = -p.xi() * std::log(-std::log(q));
  return p.mu() + p.sigma() * std::expm1(w) / p.xi();
}

/// Finite endpoint mu - sigma / xi (lower for xi > 0, upper for xi < 0).
[[nodiscard]] inline double endpoint(const GevParams& p) { return p.mu() - p.sigma() / p.xi(); }

/// Argmax of the unit-scale GEV density f_G(.; xi, mu).
///
/// Setting d/dy log f_G = 0 gives Psi^(-1/xi) = 1 + xi, i.e.
/// Psi = (1 + xi)^(-xi). For xi <= -1 the density increases up to the
/// upper endpoint, which is then returned.
[[nodiscard]] inline double gev_mode(double xi, double mu) {
  if (xi == 0.0) throw std::domain_error("gev_mode: xi must be non-zero");
  if (xi <= -1.0) return mu - 1.0 / xi;
  return mu + std::expm1(-xi * std::log1p(xi)) / xi;
}

}  // namespace bgev::gev
