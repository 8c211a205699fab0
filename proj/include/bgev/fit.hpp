#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "distribution.hpp"
#include "likelihood.hpp"
#include "nelder_mead.hpp"

namespace bgev {

/// Parameters held at their starting value during estimation.
struct FixedParams {
  bool xi = false;
  bool mu = false;
  bool sigma = false;
  bool delta = false;
};

struct FitOptions {
  optim::NelderMeadOptions simplex;
  FixedParams fixed;
  // fresh simplex around the incumbent after convergence, until no gain
  int max_restarts = 3;
};

struct FitResult {
  BgevParams theta_hat;
  BgevParams start;
  double neg2loglik;
  bool converged;
  int iterations;
  Matrix4 fim;  // -hessian / n at theta_hat, (mu, sigma, delta, xi) order
  std::optional<Vector4> std_errors;  // zero for fixed parameters
  FixedParams fixed;
  std::vector<double> trace;  // best -loglik per iteration, when recorded
};

class InfeasibleStart : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMinFitSize = 8;

namespace detail {

// Internal coordinates (xi, mu, ln sigma, ln(1 + delta)) restricted to the free set.
class Reparam {
 public:
  Reparam(const BgevParams& anchor, FixedParams fixed) : anchor_(anchor), fixed_(fixed) {}

  [[nodiscard]] std::vector<double> to_internal(const BgevParams& p) const {
    std::vector<double> z;
    if (!fixed_.xi) z.push_back(p.xi());
    if (!fixed_.mu) z.push_back(p.mu());
    if (!fixed_.sigma) z.push_back(std::log(p.sigma()));
    if (!fixed_.delta) z.push_back(std::log1p(p.delta()));
    return z;
  }

  [[nodiscard]] std::optional<BgevParams> to_params(const std::vector<double>& z) const {
    std::size_t k = 0;
    const double xi = fixed_.xi ? anchor_.xi() : z[k++];
    const double mu = fixed_.mu ? anchor_.mu() : z[k++];
    const double sigma = fixed_.sigma ? anchor_.sigma() : std::exp(z[k++]);
    const double delta = fixed_.delta ? anchor_.delta() : std::expm1(z[k++]);
    if (!BgevParams::admissible(xi, mu, sigma, delta)) return std::nullopt;
    return BgevParams(xi, mu, sigma, delta);
  }

 private:
  BgevParams anchor_;
  FixedParams fixed_;
};

[[nodiscard]] inline std::vector<int> free_indices(FixedParams f) {
  std::vector<int> idx;
  if (!f.mu) idx.push_back(kMu);
  if (!f.sigma) idx.push_back(kSigma);
  if (!f.delta) idx.push_back(kDelta);
  if (!f.xi) idx.push_back(kXi);
  return idx;
}

[[nodiscard]] inline std::optional<Vector4> standard_errors(const Matrix4& fim, std::size_t n,
                                                            FixedParams fixed) {
  const auto idx = free_indices(fixed);
  if (idx.empty()) return Vector4::Zero();
  Eigen::MatrixXd sub(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = fim(idx[i], idx[j]);
  }
  if (!sub.allFinite()) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd cov =
      llt.solve(Eigen::MatrixXd::Identity(idx.size(), idx.size())) / static_cast<double>(n);
  Vector4 se = Vector4::Zero();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!(cov(i, i) > 0.0)) return std::nullopt;
    se(idx[i]) = std::sqrt(cov(i, i));
  }
  return se;
}

}  // namespace detail

/// Shifts mu of `start` just enough that every observation lies inside the
/// support, leaving xi, sigma and delta untouched.
[[nodiscard]] inline BgevParams make_feasible(const BgevParams& start, std::span<const double> x) {
  if (x.empty()) return start;
  if (log_likelihood(start, x) > -std::numeric_limits<double>::infinity()) return start;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -t_min;
  for (double v : x) {
    const double t = transform_forward(v, start.sigma(), start.delta());
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
  }
  const double xi = start.xi();
  double mu = start.mu();
  // keep min Psi_i at 0.25
  if (xi > 0.0) {
    mu = std::min(mu, t_min + 0.75 / xi);
  } else {
    mu = std::max(mu, t_max - 0.75 / (-xi));
  }
  return {xi, mu, start.sigma(), start.delta()};
}

/// Data-driven default start: xi from the sign of the sample skewness,
/// sigma = 1, delta = 0, mu matching the sample median.
[[nodiscard]] inline BgevParams default_start(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("default_start: empty sample");
  std::vector<double> v(x.begin(), x.end());
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double a : v) mean += a;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double a : v) {
    m2 += (a - mean) * (a - mean);
    m3 += (a - mean) * (a - mean) * (a - mean);
  }
  const double xi = m3 >= 0.0 ? 0.1 : -0.1;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  const double median = v[v.size() / 2];
  // median of the unit GEV is mu + ((ln 2)^-xi - 1) / xi
  const double mu = median - std::expm1(-xi * std::log(std::log(2.0))) / xi;
  return make_feasible(BgevParams(xi, mu, 1.0, 0.0), x);
}

/// Maximum-likelihood fit by Nelder-Mead on (xi, mu, ln sigma, ln(1 + delta)).
[[nodiscard]] inline FitResult fit_mle(std::span<const double> x, const BgevParams& start,
                                       const FitOptions& opts = {}) {
  if (x.size() < kMinFitSize) throw std::invalid_argument("fit_mle: need at least 8 observations");
  const double start_ll = log_likelihood(start, x);
  if (!(start_ll > -std::numeric_limits<double>::infinity())) {
    throw InfeasibleStart("fit_mle: start " + to_string(start) +
                          " leaves observations outside the support");
  }
  const detail::Reparam rp(start, opts.fixed);
  auto objective = [&](const std::vector<double>& z) {
    const auto p = rp.to_params(z);
    if (!p) return std::numeric_limits<double>::infinity();
    return -log_likelihood(*p, x);
  };

  std::vector<double> z = rp.to_internal(start);
  double best = -start_ll;
  int iterations = 0;
  bool converged = z.empty();
  std::vector<double> trace;
  for (int round = 0; round <= opts.max_restarts && !z.empty(); ++round) {
    std::vector<double> steps(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) steps[i] = 0.1 * std::max(1.0, std::abs(z[i]));
    auto nm = optim::nelder_mead(objective, z, steps, opts.simplex);
    iterations += nm.iterations;
    trace.insert(trace.end(), nm.best_trace.begin(), nm.best_trace.end());
    const double gain = best - nm.fx;
    if (nm.fx <= best) {
      z = nm.x;
      best = nm.fx;
    }
    converged = nm.converged;
    if (!nm.converged || gain <= opts.simplex.ftol) break;
  }

  const BgevParams theta_hat = rp.to_params(z).value_or(start);
  const Matrix4 fim = -hessian(theta_hat, x) / static_cast<double>(x.size());
  return FitResult{theta_hat,
                   start,
                   2.0 * best,
                   converged,
                   iterations,
                   fim,
                   detail::standard_errors(fim, x.size(), opts.fixed),
                   opts.fixed,
                   std::move(trace)};
}

/// Monte Carlo estimate of the per-observation Fisher information at theta.
struct FisherEstimate {
  Matrix4 mean = Matrix4::Zero();
  Matrix4 std_error = Matrix4::Zero();  // MC standard error of each entry
  int replicates = 0;
  int skipped = 0;
};

/// Averages -hessian(theta, sample_r) / n over m seeded replicates; replicates
/// whose Hessian is not finite are skipped and counted.
[[nodiscard]] inline FisherEstimate fisher_information(const BgevParams& theta, int m,
                                                       std::size_t n, std::uint64_t seed) {
  if (m < 30) throw std::invalid_argument("fisher_information: need m >= 30 replicates");
  if (n < 1) throw std::invalid_argument("fisher_information: need n >= 1");
  FisherEstimate est;
  Matrix4 sum = Matrix4::Zero();
  Matrix4 sum_sq = Matrix4::Zero();
  for (int r = 0; r < m; ++r) {
    const auto xs = sample(n, theta, derive_seed(seed, static_cast<std::uint64_t>(r)));
    const Matrix4 info = -hessian(theta, xs) / static_cast<double>(n);
    if (!info.allFinite()) {
      ++est.skipped;
      continue;
    }
    sum += info;
    sum_sq += info.cwiseProduct(info);
    ++est.replicates;
  }
  if (est.replicates == 0) throw std::runtime_error("fisher_information: no valid replicate");
  const double k = est.replicates;
  est.mean = sum / k;
  if (est.replicates > 1) {
    const Matrix4 var = (sum_sq / k - est.mean.cwiseProduct(est.mean)) * (k / (k - 1.0));
    est.std_error = (var.cwiseMax(0.0) / k).cwiseSqrt();
  }
  return est;
}

// ---- GEV submodel (delta pinned to 0) ----

/// BGEV(xi, mu, sigma, 0) is GEV(xi, mu / sigma, 1 / sigma).
[[nodiscard]] inline GevParams to_gev(const BgevParams& p) {
  if (p.delta() != 0.0) throw std::invalid_argument("to_gev: delta must be 0");
  return {p.xi(), p.mu() / p.sigma(), 1.0 / p.sigma()};
}

[[nodiscard]] inline BgevParams from_gev(const GevParams& g) {
  return {g.xi(), g.mu() / g.sigma(), 1.0 / g.sigma(), 0.0};
}

struct GevFitResult {
  GevParams params;
  BgevParams as_bgev;
  double neg2loglik;
  bool converged;
  int iterations;
};

[[nodiscard]] inline GevFitResult fit_gev(std::span<const double> x, const GevParams& start,
                                          FitOptions opts = {}) {
  opts.fixed.delta = true;
  const auto r = fit_mle(x, from_gev(start), opts);
  return {to_gev(r.theta_hat), r.theta_hat, r.neg2loglik, r.converged, r.iterations};
}

}  // namespace bgev
