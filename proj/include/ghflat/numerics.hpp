#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ghflat {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  int max_depth = 48;
  long max_evaluations = 2000000;  // hard cap; exceeding it clears `converged`
  // Dyadic splitting toward endpoints whose integrand is unbounded
  // (integrable singularities like (pi-r)^(-1/2)).
  bool singular_endpoints = true;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b] (a <= b or a > b, signed).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Brent root bracketing/refinement; f(a), f(b) must have opposite signs.
double brent_root(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                  int max_iter = 200);

// Golden-section maximization of f on [a, b].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b,
                                     double tol = 1e-10, int max_iter = 200);

// Least-squares slope/intercept of log(y) against log(x); points with
// y <= 0 are dropped. Returns {slope, intercept, usable_points}.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(i) for i in [0, n); honors GHFLAT_THREADS (and `threads` cap when > 0).
// Work is split in contiguous blocks so results written by index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

int effective_threads(int requested = 0);

}  // namespace ghflat
