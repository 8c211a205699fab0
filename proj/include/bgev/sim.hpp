#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "distribution.hpp"
#include "fit.hpp"
#include "random.hpp"

// Monte Carlo study of the maximum-likelihood estimator: M replicates of size
// N per parameter cell, each fitted from a "truth + U(0,1)" start, summarized
// by empirical mean, bias (mean - truth) and MSE per parameter.

namespace bgev::sim {

enum class StartRule { TruePlusUniform, Custom };

struct SimConfig {
  BgevParams truth{1.0, 0.0, 1.0, 0.0};
  std::size_t n = 100;
  int m = 100;
  std::uint64_t seed = 1;
  StartRule start_rule = StartRule::TruePlusUniform;
  std::optional<BgevParams> custom_start;
  // sigma is held at its true value, as in the reference study
  bool fix_sigma = true;
  double max_failure_fraction = 0.2;
  FitOptions fit;
};

/// Per-parameter summaries are indexed xi, mu, sigma, delta.
struct ParamStats {
  double mean = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  double variance = 0.0;
};

struct SimReport {
  SimConfig config;
  ParamStats xi, mu, sigma, delta;
  int converged = 0;
  int failures = 0;
  double wall_seconds = 0.0;
  std::optional<std::string> error;
};

namespace detail {

inline constexpr int kMaxShrink = 30;

[[nodiscard]] inline BgevParams perturbed_start(const SimConfig& cfg, std::span<const double> x,
                                                std::uint64_t seed) {
  if (cfg.start_rule == StartRule::Custom) {
    if (!cfg.custom_start) throw std::invalid_argument("custom start rule without a start");
    return *cfg.custom_start;
  }
  Rng rng(seed);
  const double u_xi = rng.uniform();
  const double u_mu = rng.uniform();
  const double u_sigma = rng.uniform();
  const double u_delta = rng.uniform();
  const BgevParams& t = cfg.truth;
  double scale = 1.0;
  for (int i = 0; i < kMaxShrink; ++i, scale *= 0.5) {
    double xi = t.xi() + scale * u_xi;
    if (xi == 0.0) xi = 1e-6;
    const double sigma = cfg.fix_sigma ? t.sigma() : std::max(t.sigma() + scale * u_sigma, 1e-6);
    const double delta = std::max(t.delta() + scale * u_delta, -1.0 + 1e-6);
    const BgevParams cand(xi, t.mu() + scale * u_mu, sigma, delta);
    if (log_likelihood(cand, x) > -std::numeric_limits<double>::infinity()) return cand;
  }
  return t;
}

struct Replicate {
  bool ok = false;
  double xi = 0.0, mu = 0.0, sigma = 0.0, delta = 0.0;
};

[[nodiscard]] inline Replicate run_replicate(const SimConfig& cfg, int r) {
  const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
  const auto x = sample(cfg.n, cfg.truth, rep_seed);
  const BgevParams start = perturbed_start(cfg, x, derive_seed(rep_seed, 1));
  FitOptions opts = cfg.fit;
  opts.fixed.sigma = opts.fixed.sigma || cfg.fix_sigma;
  try {
    const auto fr = fit_mle(x, start, opts);
    if (!fr.converged) return {};
    const auto& th = fr.theta_hat;
    return {true, th.xi(), th.mu(), th.sigma(), th.delta()};
  } catch (const std::exception&) {
    return {};
  }
}

[[nodiscard]] inline ParamStats summarize(const std::vector<double>& est, double truth) {
  ParamStats s;
  if (est.empty()) return s;
  const double k = static_cast<double>(est.size());
  for (double e : est) s.mean += e;
  s.mean /= k;
  for (double e : est) {
    s.mse += (e - truth) * (e - truth);
    s.variance += (e - s.mean) * (e - s.mean);
  }
  s.mse /= k;
  s.variance /= k;
  s.bias = s.mean - truth;
  return s;
}

}  // namespace detail

/// Runs one cell. Replicates are distributed over `parallelism` threads; each
/// replicate's seed depends only on (cell seed, replicate index), so the
/// report does not depend on the thread count.
[[nodiscard]] inline SimReport run_cell(const SimConfig& cfg, unsigned parallelism = 1) {
  if (cfg.m < 1) throw std::invalid_argument("run_cell: m must be >= 1");
  if (cfg.n < kMinFitSize) throw std::invalid_argument("run_cell: n must be >= 8");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<detail::Replicate> reps(cfg.m);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < cfg.m; r = next++) reps[r] = detail::run_replicate(cfg, r);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, cfg.m));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  SimReport rep;
  rep.config = cfg;
  std::vector<double> xi, mu, sigma, delta;
  for (const auto& r : reps) {
    if (!r.ok) {
      ++rep.failures;
      continue;
    }
    xi.push_back(r.xi);
    mu.push_back(r.mu);
    sigma.push_back(r.sigma);
    delta.push_back(r.delta);
  }
  rep.converged = static_cast<int>(xi.size());
  rep.xi = detail::summarize(xi, cfg.truth.xi());
  rep.mu = detail::summarize(mu, cfg.truth.mu());
  rep.sigma = detail::summarize(sigma, cfg.truth.sigma());
  rep.delta = detail::summarize(delta, cfg.truth.delta());
  if (rep.failures > cfg.max_failure_fraction * cfg.m) {
    rep.error = std::to_string(rep.failures) + " of " + std::to_string(cfg.m) +
                " replicates failed to converge";
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---- rendering ----

namespace detail {

inline std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fixed(double v, int prec, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, prec, v);
  return buf;
}

}  // namespace detail

/// CSV with one row per cell. Sigma statistics are appended only when some
/// cell estimates sigma.
[[nodiscard]] inline std::string render_csv(const std::vector<SimReport>& reports) {
  bool any_sigma = false;
  for (const auto& r : reports) any_sigma = any_sigma || !r.config.fix_sigma;
  std::ostringstream os;
  os << "xi,mu,sigma,delta,n,m,seed,mean_xi,mean_mu,mean_delta,bias_xi,bias_mu,bias_delta,"
        "mse_xi,mse_mu,mse_delta,failures";
  if (any_sigma) os << ",mean_sigma,bias_sigma,mse_sigma";
  os << '\n';
  using detail::g17;
  for (const auto& r : reports) {
    const auto& t = r.config.truth;
    os << g17(t.xi()) << ',' << g17(t.mu()) << ',' << g17(t.sigma()) << ',' << g17(t.delta())
       << ',' << r.config.n << ',' << r.config.m << ',' << r.config.seed << ',' << g17(r.xi.mean)
       << ',' << g17(r.mu.mean) << ',' << g17(r.delta.mean) << ',' << g17(r.xi.bias) << ','
       << g17(r.mu.bias) << ',' << g17(r.delta.bias) << ',' << g17(r.xi.mse) << ','
       << g17(r.mu.mse) << ',' << g17(r.delta.mse) << ',' << r.failures;
    if (any_sigma) {
      os << ',' << g17(r.sigma.mean) << ',' << g17(r.sigma.bias) << ',' << g17(r.sigma.mse);
    }
    os << '\n';
  }
  return os.str();
}

/// Plain-text table in the layout of the published study: empirical means,
/// then bias, then MSE.
[[nodiscard]] inline std::string render_table(const std::vector<SimReport>& reports) {
  using detail::fixed;
  std::ostringstream os;
  os << "     n |     xi    xi_hat |     mu    mu_hat |  delta delta_hat ||"
        "  bias_xi  bias_mu bias_del ||   mse_xi   mse_mu  mse_del | fail\n";
  os << std::string(128, '-') << '\n';
  for (const auto& r : reports) {
    const auto& t = r.config.truth;
    os << fixed(static_cast<double>(r.config.n), 0, 6) << " |" << fixed(t.xi(), 3, 7)
       << fixed(r.xi.mean, 3, 10) << " |" << fixed(t.mu(), 3, 7) << fixed(r.mu.mean, 3, 10)
       << " |" << fixed(t.delta(), 3, 7) << fixed(r.delta.mean, 3, 10) << " ||"
       << fixed(r.xi.bias, 4, 9) << fixed(r.mu.bias, 4, 9) << fixed(r.delta.bias, 4, 9) << " ||"
       << fixed(r.xi.mse, 4, 9) << fixed(r.mu.mse, 4, 9) << fixed(r.delta.mse, 4, 9) << " |"
       << fixed(r.failures, 0, 5);
    if (r.error) os << "  ! " << *r.error;
    os << '\n';
  }
  return os.str();
}

struct SuiteResult {
  std::vector<SimReport> reports;
  std::vector<std::string> errors;
  std::string csv;
  std::string table;
};

/// Runs every cell in order; cell-level errors are collected while the
/// remaining cells still run.
[[nodiscard]] inline SuiteResult run_suite(const std::vector<SimConfig>& cells,
                                           unsigned parallelism = 1) {
  if (cells.empty()) throw std::invalid_argument("run_suite: no cells");
  SuiteResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      out.reports.push_back(run_cell(cells[i], parallelism));
      if (out.reports.back().error) {
        out.errors.push_back("cell " + std::to_string(i) + ": " + *out.reports.back().error);
      }
    } catch (const std::exception& e) {
      out.errors.push_back("cell " + std::to_string(i) + ": " + e.what());
    }
  }
  out.csv = render_csv(out.reports);
  out.table = render_table(out.reports);
  return out;
}

}  // namespace bgev::sim
