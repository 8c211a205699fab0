#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace bgev::optim {

struct NelderMeadOptions {
  int max_iterations = 5000;
  double ftol = 1e-8;  // spread of function values across the simplex
  double xtol = 1e-8;  // max distance of any vertex from the best one
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  bool record_trace = false;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best value after each iteration, when recorded
};

/// Derivative-free minimization of f over R^d. Non-finite objective values
/// are treated as +inf, so infeasible proposals are never accepted.
template <class F>
NelderMeadResult nelder_mead(const F& f, const std::vector<double>& x0,
                             const std::vector<double>& steps, const NelderMeadOptions& opts = {}) {
  const std::size_t d = x0.size();
  auto eval = [&](const std::vector<double>& x, int& counter) {
    ++counter;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  NelderMeadResult res;
  std::vector<std::vector<double>> simplex(d + 1, x0);
  std::vector<double> values(d + 1);
  for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += steps[i];
  for (std::size_t i = 0; i <= d; ++i) values[i] = eval(simplex[i], res.evaluations);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);

  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(d + 1);
    std::vector<double> v(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  auto converged = [&] {
    if (!std::isfinite(values[d])) return false;
    if (values[d] - values[0] <= opts.ftol) return true;
    double size = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        size = std::max(size, std::abs(simplex[i][j] - simplex[0][j]));
      }
    }
    return size <= opts.xtol;
  };

  sort_simplex();
  while (res.iterations < opts.max_iterations) {
    if (converged()) {
      res.converged = true;
      break;
    }
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    const auto& worst = simplex[d];
    for (std::size_t j = 0; j < d; ++j) {
      trial[j] = centroid[j] + opts.reflection * (centroid[j] - worst[j]);
    }
    const double fr = eval(trial, res.evaluations);

    if (fr < values[0]) {
      for (std::size_t j = 0; j < d; ++j) {
        trial2[j] = centroid[j] + opts.expansion * (trial[j] - centroid[j]);
      }
      const double fe = eval(trial2, res.evaluations);
      if (fe < fr) {
        simplex[d] = trial2;
        values[d] = fe;
      } else {
        simplex[d] = trial;
        values[d] = fr;
      }
    } else if (fr < values[d - 1]) {
      simplex[d] = trial;
      values[d] = fr;
    } else {
      // contraction: outside if the reflected point beats the worst vertex
      const bool outside = fr < values[d];
      for (std::size_t j = 0; j < d; ++j) {
        trial2[j] = outside ? centroid[j] + opts.contraction * (trial[j] - centroid[j])
                            : centroid[j] + opts.contraction * (worst[j] - centroid[j]);
      }
      const double fc = eval(trial2, res.evaluations);
      if (fc < (outside ? fr : values[d])) {
        simplex[d] = trial2;
        values[d] = fc;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            simplex[i][j] = simplex[0][j] + opts.shrink * (simplex[i][j] - simplex[0][j]);
          }
          values[i] = eval(simplex[i], res.evaluations);
        }
      }
    }
    sort_simplex();
    if (opts.record_trace) res.best_trace.push_back(values[0]);
  }
  if (!res.converged && converged()) res.converged = true;
  res.x = simplex[0];
  res.fx = values[0];
  return res;
}

}  // namespace bgev::optim
