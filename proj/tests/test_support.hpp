#pragma once

// Independent oracles shared by the unit and acceptance tests. Nothing here
// calls into the library's own numerics (quadrature, special functions); the
// distribution functions appear only where a grid is placed or scanned.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <bgev/distribution.hpp>
#include <bgev/params.hpp>
#include <cstdint>

namespace oracle {

/// Random admissible parameters; |xi| in [0.1, 1], sigma in [0.5, 2].
struct ParamDraw {
  double xi_abs_lo = 0.1, xi_abs_hi = 1.0;
  int xi_sign = 0;  // 0 random, +1 / -1 fixed
  double mu_lo = -1.0, mu_hi = 1.0;
  double sigma_lo = 0.5, sigma_hi = 2.0;
  double delta_lo = -0.5, delta_hi = 3.0;
};

inline bgev::BgevParams random_params(std::mt19937_64& g, const ParamDraw& d = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(g); };
  double xi = in(d.xi_abs_lo, d.xi_abs_hi);
  const int sign = d.xi_sign != 0 ? d.xi_sign : (u(g) < 0.5 ? -1 : 1);
  xi *= sign;
  return {xi, in(d.mu_lo, d.mu_hi), in(d.sigma_lo, d.sigma_hi), in(d.delta_lo, d.delta_hi)};
}

/// Fourth-order central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Fourth-order central difference over a halving sequence of steps,
/// returning the estimate that changed least from its predecessor. Large steps
/// suffer truncation (or leave the domain near a boundary), tiny ones roundoff.
inline double derivative_refined(const std::function<double(double)>& f, double x, double h,
                                 int halvings = 20) {
  double prev = derivative(f, x, h);
  double best = prev;
  double best_change = std::numeric_limits<double>::infinity();
  for (int i = 0; i < halvings; ++i) {
    h *= 0.5;
    const double cur = derivative(f, x, h);
    const double change = std::fabs(cur - prev);
    if (std::isfinite(cur) && change < best_change) {
      best = cur;
      best_change = change;
    } else if (std::isfinite(best_change) && change > 100.0 * best_change) {
      break;
    }
    prev = cur;
  }
  return best;
}

/// Integral of f over (a, b), either end possibly infinite, split at `cuts`.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> cuts = {}) {
  std::vector<double> pts{a};
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    if (std::isinf(lo) && std::isinf(hi)) {
      boost::math::quadrature::exp_sinh<double> es;
      total += es.integrate([&](double t) { return f(-t); }, 0.0,
                            std::numeric_limits<double>::infinity()) +
               es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
    } else if (std::isinf(hi)) {
      boost::math::quadrature::exp_sinh<double> es;
      total += es.integrate([&](double t) { return f(lo + t); }, 0.0,
                            std::numeric_limits<double>::infinity());
    } else if (std::isinf(lo)) {
      boost::math::quadrature::exp_sinh<double> es;
      total += es.integrate([&](double t) { return f(hi - t); }, 0.0,
                            std::numeric_limits<double>::infinity());
    } else {
      boost::math::quadrature::tanh_sinh<double> ts;
      total += ts.integrate(f, lo, hi);
    }
  }
  return total;
}

/// Textbook GEV cdf exp(-(1 + xi (y - mu) / sigma)^(-1/xi)), written out
/// independently of the library.
inline double gev_cdf(double y, double xi, double mu, double sigma) {
  const double s = 1.0 + xi * (y - mu) / sigma;
  if (s <= 0.0) return xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::pow(s, -1.0 / xi));
}

inline double gev_pdf(double y, double xi, double mu, double sigma) {
  const double s = 1.0 + xi * (y - mu) / sigma;
  if (s <= 0.0) return 0.0;
  return std::pow(s, -1.0 / xi - 1.0) * std::exp(-std::pow(s, -1.0 / xi)) / sigma;
}

/// E[X^(k(delta+1))] as the integral over z in (0, inf) of x(z)^m e^-z, where
/// z = -ln u and x(z) is the quantile at u = e^-z. Working in z keeps full
/// precision in the upper tail, which u-space quadrature truncates at 1 - 2^-53.
inline double bgev_moment(int k, const bgev::BgevParams& p) {
  const double xi = p.xi(), mu = p.mu();
  const long m = std::lround(k * (p.delta() + 1.0));
  auto f = [&](double z) {
    if (!(z > 0.0)) return 0.0;
    const double y = mu + std::expm1(-xi * std::log(z)) / xi;
    const double mag = std::pow(std::fabs(y) / p.sigma(), k);
    const double v = (y < 0.0 && m % 2 != 0 ? -mag : mag) * std::exp(-z);
    return std::isfinite(v) ? v : 0.0;
  };
  std::vector<double> cuts{1.0};
  // y changes sign at z0 = (1 - xi mu)^(-1/xi)
  if (1.0 - xi * mu > 0.0) cuts.push_back(std::pow(1.0 - xi * mu, -1.0 / xi));
  return integrate(f, 0.0, std::numeric_limits<double>::infinity(), cuts);
}

/// Golden-section maximization in long double on [a, b].
inline long double golden_max(const std::function<long double(long double)>& f, long double a,
                              long double b, int iters = 200) {
  const long double r = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double c = b - r * (b - a), d = a + r * (b - a);
  long double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-15L * (1.0L + std::fabs(a)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0L;
}

/// Brute-force KS: sup over every order statistic of both one-sided gaps,
/// computed from the definition with a fresh empirical cdf per point.
inline double brute_ks(std::vector<double> x, const std::function<double(double)>& F) {
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (double xi : x) {
    double below = 0.0, at_or_below = 0.0;
    for (double xj : x) {
      below += xj < xi;
      at_or_below += xj <= xi;
    }
    d = std::max({d, std::fabs(at_or_below / n - F(xi)), std::fabs(F(xi) - below / n)});
  }
  return d;
}

/// Brute-force AD from A^2 = -n - sum_i (2i-1)/n [ln u_i + ln(1 - u_{n+1-i})].
inline double brute_ad(std::vector<double> x, const std::function<double(double)>& F) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    s += (2.0 * i - 1.0) / n * (std::log(F(x[i - 1])) + std::log(1.0 - F(x[n - i])));
  }
  return -static_cast<double>(n) - s;
}

/// Count of local maxima of f on an equispaced grid (interior points only).
inline int grid_local_maxima(const std::function<double(double)>& f, double a, double b,
                             int points) {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = f(a + (b - a) * i / (points - 1));
  int count = 0;
  for (int i = 1; i + 1 < points; ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) ++count;
  }
  return count;
}

/// Grid-scan mode count over the support; a finite endpoint is used as is,
/// since a mode can sit where almost no mass is.
inline int scan_modes(const bgev::BgevParams& p, int points) {
  const auto s = bgev::support(p);
  const double a = std::isfinite(s.lower) ? s.lower : bgev::quantile(1e-12, p);
  const double b = std::isfinite(s.upper) ? s.upper : std::min(bgev::quantile(1 - 1e-9, p), a + 60.0);
  return grid_local_maxima([&](double x) { return bgev::pdf(x, p); }, a, b, points);
}

}  // namespace oracle
