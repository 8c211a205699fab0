// Minimal tour: density, sampling, fitting and a goodness-of-fit check.

#include <cstdio>

#include <bgev.hpp>

int main() {
  const bgev::BgevParams truth(-0.25, -0.375, 1.0, 2.0);

  const auto cp = bgev::critical_points(truth);
  std::printf("%s is %s with %zu critical points\n", bgev::to_string(truth).c_str(),
              bgev::to_string(cp.classification), cp.points.size());
  for (double x : {-1.0, 0.0, 0.5, 1.0}) {
    std::printf("  pdf(%5.2f) = %.6f   cdf = %.6f\n", x, bgev::pdf(x, truth), bgev::cdf(x, truth));
  }

  const auto x = bgev::sample(500, truth, 42);
  const auto fit = bgev::fit_mle(x, bgev::default_start(x));
  std::printf("MLE: %s  -2l = %.3f  converged = %d\n", bgev::to_string(fit.theta_hat).c_str(),
              fit.neg2loglik, fit.converged);
  if (fit.std_errors) {
    const auto& se = *fit.std_errors;
    std::printf("s.e. mu %.4f sigma %.4f delta %.4f xi %.4f\n", se(bgev::kMu), se(bgev::kSigma),
                se(bgev::kDelta), se(bgev::kXi));
  }

  const auto& th = fit.theta_hat;
  const auto report = bgev::gof::evaluate(
      x, [&](double v) { return bgev::cdf(v, th); },
      [&](double q) { return bgev::quantile(q, th); });
  std::printf("KS = %.5f  AD = %.4f\n", report.ks, report.ad);
  return 0;
}
