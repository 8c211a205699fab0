#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bgev {

/// Parameter vector (xi, mu, sigma, delta) of the bimodal GEV family.
///
/// The density is f_G(T(x); xi, mu) * T'(x) with T(x) = sigma * x * |x|^delta
/// and f_G the unit-scale GEV density. Construction rejects xi == 0,
/// sigma <= 0 and delta <= -1.
class BgevParams {
 public:
  BgevParams(double xi, double mu, double sigma, double delta)
      : xi_(xi), mu_(mu), sigma_(sigma), delta_(delta) {
    if (!std::isfinite(xi) || !std::isfinite(mu) || !std::isfinite(sigma) ||
        !std::isfinite(delta)) {
      throw std::invalid_argument("BgevParams: non-finite parameter");
    }
    if (xi == 0.0) throw std::invalid_argument("BgevParams: xi must be non-zero");
    if (!(sigma > 0.0)) throw std::invalid_argument("BgevParams: sigma must be > 0");
    if (!(delta > -1.0)) throw std::invalid_argument("BgevParams: delta must be > -1");
  }

  [[nodiscard]] double xi() const { return xi_; }
  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] double delta() const { return delta_; }

  [[nodiscard]] static bool admissible(double xi, double mu, double sigma, double delta) {
    return std::isfinite(xi) && std::isfinite(mu) && std::isfinite(sigma) &&
           std::isfinite(delta) && xi != 0.0 && sigma > 0.0 && delta > -1.0;
  }

  friend bool operator==(const BgevParams&, const BgevParams&) = default;

 private:
  double xi_;
  double mu_;
  double sigma_;
  double delta_;
};

/// Classical three-parameter GEV (shape, location, scale).
class GevParams {
 public:
  GevParams(double xi, double mu, double sigma) : xi_(xi), mu_(mu), sigma_(sigma) {
    if (!std::isfinite(xi) || !std::isfinite(mu) || !std::isfinite(sigma)) {
      throw std::invalid_argument("GevParams: non-finite parameter");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("GevParams: sigma must be > 0");
  }

  [[nodiscard]] double xi() const { return xi_; }
  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] double sigma() const { return sigma_; }

  friend bool operator==(const GevParams&, const GevParams&) = default;

 private:
  double xi_;
  double mu_;
  double sigma_;
};

enum class SupportKind { LeftBounded, RightBounded };

/// Open half-line on which the density is positive.
struct Support {
  double lower;
  double upper;
  SupportKind kind;

  [[nodiscard]] bool contains(double x) const { return x > lower && x < upper; }
};

inline std::string to_string(const BgevParams& p) {
  return "(xi=" + std::to_string(p.xi()) + ", mu=" + std::to_string(p.mu()) +
         ", sigma=" + std::to_string(p.sigma()) + ", delta=" + std::to_string(p.delta()) + ")";
}

}  // namespace bgev
