#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "params.hpp"

// Log-likelihood of a BGEV sample with its analytic gradient and Hessian.
//
// Derivative vectors and matrices are ordered (mu, sigma, delta, xi). Writing
// the per-observation kernel as L(Psi, xi) = -(1 + 1/xi) ln Psi - Psi^(-1/xi)
// with Psi = 1 + xi (sigma t - mu) and t = x |x|^delta, every derivative is a
// chain rule over the partials of L and the partials of Psi.

namespace bgev {

enum ParamIndex : int { kMu = 0, kSigma = 1, kDelta = 2, kXi = 3 };

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/// Per-observation Psi_i and Omega_i = Psi_i^-1 [1 + xi - Psi_i^(-1/xi)].
struct LikelihoodWorkspace {
  std::vector<double> psi;
  std::vector<double> omega;
  bool valid = true;
};

[[nodiscard]] inline LikelihoodWorkspace make_workspace(const BgevParams& theta,
                                                        std::span<const double> x) {
  LikelihoodWorkspace ws;
  ws.psi.reserve(x.size());
  ws.omega.reserve(x.size());
  const double xi = theta.xi();
  for (double xv : x) {
    const double t = xv == 0.0 ? 0.0 : xv * std::pow(std::abs(xv), theta.delta());
    const double psi = 1.0 + xi * (theta.sigma() * t - theta.mu());
    ws.psi.push_back(psi);
    if (!(psi > 0.0)) {
      ws.valid = false;
      ws.omega.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double u = std::exp(-std::log(psi) / xi);
    ws.omega.push_back((1.0 + xi - u) / psi);
  }
  return ws;
}

/// l(theta) = n ln sigma + n ln(delta + 1)
///            + sum [delta ln|x_i| - (1 + 1/xi) ln Psi_i - Psi_i^(-1/xi)].
/// Returns -inf when some Psi_i <= 0 or some x_i = 0 with delta != 0.
[[nodiscard]] inline double log_likelihood(const BgevParams& theta, std::span<const double> x) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  const double xi = theta.xi();
  const double sigma = theta.sigma();
  const double delta = theta.delta();
  const double mu = theta.mu();
  double sum = 0.0;
  for (double xv : x) {
    double t = 0.0;
    if (xv == 0.0) {
      if (delta != 0.0) return neg_inf;
    } else {
      const double lx = std::log(std::abs(xv));
      const double mag = std::exp(delta * lx);
      t = xv < 0.0 ? -std::abs(xv) * mag : std::abs(xv) * mag;
      sum += delta * lx;
    }
    const double s = xi * (sigma * t - mu);
    if (!(s > -1.0)) return neg_inf;
    const double lpsi = std::log1p(s);
    sum -= (1.0 + 1.0 / xi) * lpsi + std::exp(-lpsi / xi);
  }
  const double n = static_cast<double>(x.size());
  const double total = sum + n * (std::log(sigma) + std::log1p(delta));
  return std::isnan(total) ? neg_inf : total;
}

namespace detail {

struct ObservationPartials {
  // d Psi / d theta and d2 Psi / d theta2 in (mu, sigma, delta, xi) order
  Vector4 dpsi;
  Matrix4 d2psi;
  double log_abs_x;
  double l_psi, l_psipsi, l_xi, l_xixi, l_psixi;
};

[[nodiscard]] inline bool observation_partials(const BgevParams& theta, double xv,
                                               ObservationPartials& out) {
  if (xv == 0.0) return false;
  const double xi = theta.xi();
  const double sigma = theta.sigma();
  const double lx = std::log(std::abs(xv));
  const double t = (xv < 0.0 ? -1.0 : 1.0) * std::exp((theta.delta() + 1.0) * lx);
  const double s = sigma * t - theta.mu();
  const double arg = xi * s;
  if (!(arg > -1.0)) return false;
  const double psi = 1.0 + arg;
  const double lp = std::log1p(arg);
  const double u = std::exp(-lp / xi);
  const double omega = (1.0 + xi - u) / psi;
  const double xi2 = xi * xi;

  out.log_abs_x = lx;
  out.l_psi = -omega / xi;
  out.l_psipsi = (1.0 + xi) * (xi - u) / (xi2 * psi * psi);
  out.l_xi = lp * (1.0 - u) / xi2;
  out.l_xixi = -2.0 * lp * (1.0 - u) / (xi2 * xi) - u * lp * lp / (xi2 * xi2);
  out.l_psixi = ((1.0 - u) / xi2 + u * lp / (xi2 * xi)) / psi;

  const double tl = t * lx;
  out.dpsi << -xi, xi * t, xi * sigma * tl, s;
  out.d2psi.setZero();
  out.d2psi(kMu, kXi) = out.d2psi(kXi, kMu) = -1.0;
  out.d2psi(kSigma, kDelta) = out.d2psi(kDelta, kSigma) = xi * tl;
  out.d2psi(kSigma, kXi) = out.d2psi(kXi, kSigma) = t;
  out.d2psi(kDelta, kDelta) = xi * sigma * tl * lx;
  out.d2psi(kDelta, kXi) = out.d2psi(kXi, kDelta) = sigma * tl;
  return true;
}

}  // namespace detail

/// Analytic gradient (dl/dmu, dl/dsigma, dl/ddelta, dl/dxi); NaN-filled when
/// theta is infeasible for x.
[[nodiscard]] inline Vector4 score(const BgevParams& theta, std::span<const double> x) {
  Vector4 g = Vector4::Zero();
  detail::ObservationPartials op;
  for (double xv : x) {
    if (!detail::observation_partials(theta, xv, op)) {
      return Vector4::Constant(std::numeric_limits<double>::quiet_NaN());
    }
    g += op.l_psi * op.dpsi;
    g(kXi) += op.l_xi;
    g(kDelta) += op.log_abs_x;
  }
  const double n = static_cast<double>(x.size());
  g(kSigma) += n / theta.sigma();
  g(kDelta) += n / (1.0 + theta.delta());
  return g;
}

/// Analytic Hessian of the log-likelihood, symmetric by construction.
[[nodiscard]] inline Matrix4 hessian(const BgevParams& theta, std::span<const double> x) {
  Matrix4 h = Matrix4::Zero();
  detail::ObservationPartials op;
  for (double xv : x) {
    if (!detail::observation_partials(theta, xv, op)) {
      return Matrix4::Constant(std::numeric_limits<double>::quiet_NaN());
    }
    h += op.l_psipsi * (op.dpsi * op.dpsi.transpose()) + op.l_psi * op.d2psi;
    Vector4 cross = op.l_psixi * op.dpsi;
    h.col(kXi) += cross;
    h.row(kXi) += cross.transpose();
    h(kXi, kXi) += op.l_xixi;
  }
  const double n = static_cast<double>(x.size());
  h(kSigma, kSigma) -= n / (theta.sigma() * theta.sigma());
  h(kDelta, kDelta) -= n / ((1.0 + theta.delta()) * (1.0 + theta.delta()));
  return h;
}

}  // namespace bgev
