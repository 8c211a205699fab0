#pragma once

#include <cmath>
#include <stdexcept>

// Power transformation T(x) = sigma * x * |x|^delta and its inverse/derivatives.

namespace bgev {

[[nodiscard]] inline double transform_forward(double x, double sigma, double delta) {
  if (x == 0.0) return 0.0;
  return sigma * x * std::pow(std::abs(x), delta);
}

[[nodiscard]] inline double transform_inverse(double y, double sigma, double delta) {
  if (y == 0.0) return 0.0;
  const double r = std::pow(std::abs(y) / sigma, 1.0 / (delta + 1.0));
  return y < 0.0 ? -r : r;
}

/// T'(x) = sigma (delta + 1) |x|^delta. Singular at the origin for delta < 0.
[[nodiscard]] inline double transform_d1(double x, double sigma, double delta) {
  if (x == 0.0) {
    if (delta < 0.0) throw std::domain_error("transform_d1: singular at x = 0 for delta < 0");
    return delta == 0.0 ? sigma : 0.0;
  }
  return sigma * (delta + 1.0) * std::pow(std::abs(x), delta);
}

/// T''(x) = sign(x) sigma (delta + 1) delta |x|^(delta - 1).
[[nodiscard]] inline double transform_d2(double x, double sigma, double delta) {
  if (x == 0.0) {
    if (delta == 0.0) return 0.0;
    if (delta < 1.0) throw std::domain_error("transform_d2: singular at x = 0 for delta < 1");
    // delta == 1 has a jump in T'' at 0; the symmetric value is 0
    return 0.0;
  }
  const double v = sigma * (delta + 1.0) * delta * std::pow(std::abs(x), delta - 1.0);
  return x < 0.0 ? -v : v;
}

}  // namespace bgev
