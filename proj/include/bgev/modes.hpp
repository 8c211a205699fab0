#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "distribution.hpp"

namespace bgev {

enum class Modality { Unimodal, Bimodal, Degenerate };

/// Stationary points of the density and the modes they induce.
///
/// `points` holds the zeros of the density derivative strictly inside the
/// support (ascending). `modes` lists the local maxima, which may also include
/// the pole at x = 0 (delta < 0) or a finite support endpoint where the
/// density increases into the boundary (xi <= -1).
struct CriticalPoints {
  std::vector<double> points;
  std::vector<double> modes;
  Modality classification = Modality::Degenerate;
};

namespace detail {

// Stationarity in y = Psi = 1 + xi (T(x) - mu): the density derivative has the
// sign of G(y) * sign(T(x)), where
//   G(y) = delta y - (delta + 1) t (1 + xi - y^(-1/xi)),  t = mu + (y - 1) / xi.
[[nodiscard]] inline double stationarity(double y, const BgevParams& p) {
  const double xi = p.xi();
  const double t = p.mu() + (y - 1.0) / xi;
  const double tail = std::exp(-std::log(y) / xi);
  return p.delta() * y - (p.delta() + 1.0) * t * (1.0 + xi - tail);
}

[[nodiscard]] inline double y_to_x(double y, const BgevParams& p) {
  return transform_inverse(p.mu() + (y - 1.0) / p.xi(), p.sigma(), p.delta());
}

[[nodiscard]] inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace detail

/// Locates every stationary point of the density.
///
/// A geometric grid in y covers the 1e-12 .. 1 - 1e-12 quantile range, widened
/// well below y0 = 1 - xi mu (the image of x = 0) so modes in the far lower
/// tail are not missed; sign changes of G on either side of y0 are refined by
/// bisection to relative 1e-12.
[[nodiscard]] inline CriticalPoints critical_points(const BgevParams& p,
                                                    int points_per_decade = 200) {
  const double xi = p.xi();
  const double delta = p.delta();
  const double ya = std::pow(-std::log(1e-12), -xi);
  const double yb = std::pow(-std::log1p(-1e-12), -xi);
  double y_min = std::min(ya, yb);
  const double y_max = std::max(ya, yb);
  const double y0 = 1.0 - xi * p.mu();
  if (y0 > 0.0) y_min = std::min(y_min, 1e-6 * y0);
  y_min = std::max(y_min, 1e-300);

  const double decades = std::log10(y_max / y_min);
  const int n = std::max(64, static_cast<int>(std::ceil(decades * points_per_decade)));
  const double ratio = std::pow(y_max / y_min, 1.0 / n);

  struct Root {
    double x;
    bool is_max;
  };
  std::vector<Root> roots;

  auto side = [&](double y) { return y0 > 0.0 ? detail::sign_of(y - y0) : 1; };

  double y_prev = y_min;
  double g_prev = detail::stationarity(y_prev, p);
  for (int i = 1; i <= n; ++i) {
    const double y = (i == n) ? y_max : y_min * std::pow(ratio, i);
    const double g = detail::stationarity(y, p);
    const bool same_side = side(y_prev) == side(y) && side(y) != 0;
    if (same_side && std::isfinite(g) && std::isfinite(g_prev) &&
        detail::sign_of(g) * detail::sign_of(g_prev) < 0) {
      double lo = y_prev;
      double hi = y;
      double g_lo = g_prev;
      while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double gm = detail::stationarity(mid, p);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (detail::sign_of(gm) == detail::sign_of(g_lo)) {
          lo = mid;
          g_lo = gm;
        } else {
          hi = mid;
        }
      }
      const double root_y = 0.5 * (lo + hi);
      // sign of t is constant on this side of y0
      const int t_sign = detail::sign_of(p.mu() + (root_y - 1.0) / xi);
      // density increasing just left of the root (in x) marks a maximum
      const double g_left_in_x = xi > 0.0 ? g_prev : g;
      const bool is_max = detail::sign_of(g_left_in_x) * t_sign > 0;
      roots.push_back({detail::y_to_x(root_y, p), is_max});
    }
    y_prev = y;
    g_prev = g;
  }

  CriticalPoints out;
  const Support sup = support(p);
  const bool zero_inside = sup.contains(0.0);
  for (const auto& r : roots) {
    if (!sup.contains(r.x) || r.x == 0.0) continue;
    out.points.push_back(r.x);
    if (r.is_max) out.modes.push_back(r.x);
  }
  if (zero_inside && delta > 1.0) out.points.push_back(0.0);
  if (zero_inside && delta < 0.0) out.modes.push_back(0.0);

  // density rising into a finite endpoint (only possible for xi <= -1)
  if (xi < 0.0) {
    const double g_edge = detail::stationarity(y_min, p);
    const int t_sign = detail::sign_of(p.mu() + (y_min - 1.0) / xi);
    if (detail::sign_of(g_edge) * t_sign > 0 && xi <= -1.0) out.modes.push_back(sup.upper);
  }

  std::sort(out.points.begin(), out.points.end());
  std::sort(out.modes.begin(), out.modes.end());
  if (out.modes.size() == 1) {
    out.classification = Modality::Unimodal;
  } else if (out.modes.size() == 2) {
    out.classification = Modality::Bimodal;
  } else {
    out.classification = Modality::Degenerate;
  }
  return out;
}

inline const char* to_string(Modality m) {
  switch (m) {
    case Modality::Unimodal:
      return "unimodal";
    case Modality::Bimodal:
      return "bimodal";
    case Modality::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

}  // namespace bgev
