#include "ghflat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace ghflat {

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] with the embedded
// 7-point Gauss rule (classic QUADPACK tables).
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  evals += 15;
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  result_g *= h;
  result_k *= h;
  double err = std::abs(result_k - result_g);
  // QUADPACK-style error sharpening.
  if (err != 0.0) err = err * std::min(1.0, std::pow(200.0 * err / std::max(1e-300, std::abs(result_k)), 1.5));
  return {result_k, std::max(err, std::abs(result_k) * 1e-15)};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           const QuadratureOptions& opts, QuadratureResult& out) {
  PanelResult p = gk15(f, a, b, out.evaluations);
  if (out.evaluations > opts.max_evaluations) {
    out.value += std::isfinite(p.value) ? p.value : 0.0;
    out.error_estimate += p.error;
    out.converged = false;
    return;
  }
  if (std::isfinite(p.value) && (p.error <= tol || depth >= opts.max_depth)) {
    out.value += p.value;
    out.error_estimate += p.error;
    if (p.error > tol && depth >= opts.max_depth) out.converged = false;
    if (!std::isfinite(p.value)) out.converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  if (c == a || c == b) {  // interval exhausted at machine precision
    out.value += std::isfinite(p.value) ? p.value : 0.0;
    out.error_estimate += p.error;
    out.converged = false;
    return;
  }
  adapt(f, a, c, 0.5 * tol, depth + 1, opts, out);
  adapt(f, c, b, 0.5 * tol, depth + 1, opts, out);
}

bool looks_singular(const std::function<double(double)>& f, double at, double inward, double width) {
  // Probe values approaching the endpoint; sustained growth marks an
  // unbounded integrand. A (b-r)^{-alpha} blow-up grows by 10^{3 alpha} per
  // three probe decades, so a factor of 8 catches alpha >= 0.3.
  double v1 = std::abs(f(at + inward * 1e-4 * width));
  double v2 = std::abs(f(at + inward * 1e-7 * width));
  double v3 = std::abs(f(at + inward * 1e-10 * width));
  if (!std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(v3)) return true;
  return v2 > 8.0 * std::max(v1, 1e-30) && v3 > 8.0 * std::max(v2, 1e-30) && v3 > 100.0;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double width = b - a;

  // Integrable endpoint blow-ups (the (b - r)^(-1/2) kind) are regularized by
  // the substitution r = b - u^2, whose Jacobian 2u cancels the singularity.
  // Gauss-Kronrod abscissae are interior, so the endpoint itself is never hit.
  struct Panel {
    std::function<double(double)> g;
    double lo, hi;
  };
  std::vector<Panel> panels;
  const bool sing_a = opts.singular_endpoints && looks_singular(f, a, +1.0, width);
  const bool sing_b = opts.singular_endpoints && looks_singular(f, b, -1.0, width);
  const double mid = 0.5 * (a + b);
  if (sing_a) {
    const double hi = std::sqrt((sing_b ? mid : b) - a);
    panels.push_back({[f, a](double u) { return 2.0 * u * f(a + u * u); }, 0.0, hi});
  }
  if (sing_b) {
    const double hi = std::sqrt(b - (sing_a ? mid : a));
    panels.push_back({[f, b](double u) { return 2.0 * u * f(b - u * u); }, 0.0, hi});
  }
  if (!sing_a && !sing_b) panels.push_back({f, a, b});

  // First pass to scale the relative tolerance.
  double rough = 0.0;
  for (auto& p : panels) rough += gk15(p.g, p.lo, p.hi, out.evaluations).value;
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(rough));

  out.value = 0.0;
  for (auto& p : panels) adapt(p.g, p.lo, p.hi, tol / panels.size(), 0, opts, out);
  out.value *= sign;
  return out;
}

double brent_root(const std::function<double(double)>& f, double a, double b, double tol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("brent_root: endpoints do not bracket a root");
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool mflag = true;
  for (int it = 0; it < max_iter; ++it) {
    if (fb == 0.0 || std::abs(b - a) < tol) return b;
    double s;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double lo = (3.0 * a + b) / 4.0;
    bool cond = !((s > std::min(lo, b) && s < std::max(lo, b))) ||
                (mflag && std::abs(s - b) >= std::abs(b - c) / 2.0) ||
                (!mflag && std::abs(s - b) >= std::abs(c - d) / 2.0) ||
                (mflag && std::abs(b - c) < tol) || (!mflag && std::abs(c - d) < tol);
    if (cond) {
      s = 0.5 * (a + b);
      mflag = true;
    } else {
      mflag = false;
    }
    double fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if (fa * fs < 0.0) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b,
                                     double tol, int max_iter) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  LogLogFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] <= 0.0 || x[i] <= 0.0) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  fit.points = n;
  if (n < 2) return fit;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

int effective_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int n = requested > 0 ? std::min(requested, hw) : hw;
  if (const char* env = std::getenv("GHFLAT_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads) {
  if (n == 0) return;
  const int nt = std::min<std::size_t>(effective_threads(threads), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t block = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::size_t lo = t * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ghflat
