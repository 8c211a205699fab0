#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

// Globally adaptive Gauss-Kronrod (7/15) quadrature with infinite-range
// mapping. Integrable endpoint singularities are handled by subdivision since
// no node sits on an endpoint.

namespace bgev::quad {

struct Result {
  double value;
  double error;
  int intervals;
};

namespace detail {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Integrate f over the finite interval [a, b].
template <class F>
Result integrate_finite(const F& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 1e-14, int max_intervals = 4000) {
  if (a == b) return {0.0, 0.0, 0};
  if (b < a) {
    auto r = integrate_finite(f, b, a, rel_tol, abs_tol, max_intervals);
    return {-r.value, r.error, r.intervals};
  }
  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const auto left = detail::kronrod15(f, worst.a, mid);
    const auto right = detail::kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // re-sum to shed accumulated cancellation
  double sum = 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, count};
}

/// Integrate f over [a, b] where either end may be infinite.
template <class F>
Result integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-14, int max_intervals = 4000) {
  const bool a_inf = std::isinf(a);
  const bool b_inf = std::isinf(b);
  if (!a_inf && !b_inf) return integrate_finite(f, a, b, rel_tol, abs_tol, max_intervals);
  if (a_inf && b_inf) {
    auto l = integrate(f, a, 0.0, rel_tol, abs_tol, max_intervals);
    auto r = integrate(f, 0.0, b, rel_tol, abs_tol, max_intervals);
    return {l.value + r.value, l.error + r.error, l.intervals + r.intervals};
  }
  if (b_inf) {
    // x = a + t / (1 - t), t in [0, 1)
    auto g = [&](double t) {
      const double s = 1.0 - t;
      const double v = f(a + t / s);
      return v == 0.0 ? 0.0 : v / (s * s);
    };
    return integrate_finite(g, 0.0, 1.0, rel_tol, abs_tol, max_intervals);
  }
  // x = b - t / (1 - t)
  auto g = [&](double t) {
    const double s = 1.0 - t;
    const double v = f(b - t / s);
    return v == 0.0 ? 0.0 : v / (s * s);
  };
  return integrate_finite(g, 0.0, 1.0, rel_tol, abs_tol, max_intervals);
}

}  // namespace bgev::quad
