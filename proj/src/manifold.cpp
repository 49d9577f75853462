#include "ghflat/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ghflat {

double unit_sphere_area(int n) {
  // omega_n = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

double unit_ball_volume(int m) { return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0); }

bool RegionSpec::empty() const {
  for (const auto& iv : intervals)
    if (iv.b > iv.a) return false;
  return true;
}

bool RegionSpec::contains(double r) const {
  for (const auto& iv : intervals)
    if (r >= iv.a && r <= iv.b) return true;
  return false;
}

double RegionSpec::min() const {
  double m = intervals.empty() ? 0.0 : intervals[0].a;
  for (const auto& iv : intervals) m = std::min(m, iv.a);
  return m;
}

double RegionSpec::max() const {
  double m = intervals.empty() ? 0.0 : intervals[0].b;
  for (const auto& iv : intervals) m = std::max(m, iv.b);
  return m;
}

void validate(const RotSymManifold& M, int samples) {
  if (M.m < 2) throw ManifoldError("dimension must be >= 2");
  if (!(M.r_min < M.r_max)) throw ManifoldError("empty coordinate domain");
  if (!M.f || !M.h) throw ManifoldError("missing warping profiles");
  const double w = M.r_max - M.r_min;
  for (int i = 1; i < samples; ++i) {
    const double r = M.r_min + w * i / samples;
    const double fv = M.f->value(r);
    const double hv = M.h->value(r);
    if (!(fv > 0.0))
      throw ManifoldError(M.name + ": f <= 0 at interior r=" + std::to_string(r));
    if (!(hv >= 0.0))
      throw ManifoldError(M.name + ": h < 0 at r=" + std::to_string(r));
  }
  const double pole_tol = 1e-3;
  auto check_pole = [&](double r_star, bool claimed_smooth, double inward) {
    if (std::abs(M.f->value(r_star)) > 1e-8)
      throw ManifoldError(M.name + ": pole flag set but f != 0 at r=" + std::to_string(r_star));
    if (!claimed_smooth) return;
    // One-sided limit of f'/h just inside the pole. Polar caps can be much
    // narrower than the domain scale, so probe at two depths and accept
    // whichever lands inside the cap.
    double worst = 1e300;
    for (double scale : {1e-6, 1e-8}) {
      const double r = r_star + inward * scale * w;
      const double ratio = M.f->deriv1(r) / M.h->value(r);
      worst = std::min(worst, std::abs(std::abs(ratio) - 1.0));
    }
    if (worst > pole_tol)
      throw ManifoldError(M.name + ": smooth pole needs |f'/h| = 1, off by " +
                          std::to_string(worst));
  };
  if (M.pole_min) check_pole(M.r_min, M.claim_smooth_min, +1.0);
  if (M.pole_max) check_pole(M.r_max, M.claim_smooth_max, -1.0);
}

namespace {

// Integrate fn over [a, b], splitting at the profiles' interior knots so that
// narrow pieces (spline bumps) cannot slip between quadrature nodes.
QuadratureResult integrate_split(const RotSymManifold& M, const std::function<double(double)>& fn,
                                 double a, double b) {
  std::vector<double> cuts{a, b};
  for (const auto& p : {M.f, M.h})
    for (double k : p->knots())
      if (k > a + 1e-13 && k < b - 1e-13) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto q = integrate(fn, cuts[i], cuts[i + 1]);
    total.value += q.value;
    total.error_estimate += q.error_estimate;
    total.converged = total.converged && q.converged;
    total.evaluations += q.evaluations;
  }
  return total;
}

}  // namespace

ValueWithError volume(const RotSymManifold& M, const RegionSpec& R) {
  const double omega = unit_sphere_area(M.m - 1);
  ValueWithError out;
  for (const auto& iv : R.intervals) {
    if (!(iv.b > iv.a)) continue;
    if (iv.a < M.r_min - 1e-12 || iv.b > M.r_max + 1e-12)
      throw ManifoldError("region exceeds coordinate domain");
    auto q = integrate_split(
        M,
        [&](double r) {
          return M.h->value(r) * std::pow(M.f->value(r), M.m - 1);
        },
        std::max(iv.a, M.r_min), std::min(iv.b, M.r_max));
    out.value += omega * q.value;
    out.error_estimate += omega * q.error_estimate;
    out.converged = out.converged && q.converged;
  }
  return out;
}

double boundary_area(const RotSymManifold& M, double r_c) {
  if (r_c < M.r_min - 1e-12 || r_c > M.r_max + 1e-12)
    throw ManifoldError("level set outside domain");
  return unit_sphere_area(M.m - 1) * std::pow(M.f->value(r_c), M.m - 1);
}

ValueWithError radial_length(const RotSymManifold& M, double r1, double r2) {
  const double a = std::min(r1, r2), b = std::max(r1, r2);
  if (!(b > a)) return {0.0, 0.0, true};
  auto q = integrate_split(M, [&](double r) { return M.h->value(r); }, a, b);
  return {std::abs(q.value), q.error_estimate, q.converged};
}

double radial_distance_to_pole(const RotSymManifold& M, double r, bool pole_at_max) {
  return radial_length(M, r, pole_at_max ? M.r_max : M.r_min).value;
}

double radius_at_pole_distance(const RotSymManifold& M, double s, bool pole_at_max) {
  const double lo = M.r_min, hi = M.r_max;
  auto dist = [&](double r) { return radial_distance_to_pole(M, r, pole_at_max) - s; };
  if (dist(pole_at_max ? lo : hi) < 0.0)
    throw ManifoldError("pole distance exceeds radial extent");
  return brent_root(dist, lo, hi, 1e-12);
}

std::vector<double> dyadic_radii(double r0, int count) {
  std::vector<double> radii(count);
  for (int k = 0; k < count; ++k) radii[k] = r0 * std::pow(2.0, -k);
  return radii;
}

TipDensityResult tip_density(const RotSymManifold& M, bool pole_at_max, std::vector<double> radii) {
  TipDensityResult out;
  std::sort(radii.begin(), radii.end(), std::greater<double>());
  out.radii = radii;
  for (double rho : radii) {
    const double r_at = radius_at_pole_distance(M, rho, pole_at_max);
    RegionSpec ball = pole_at_max ? RegionSpec::interval(r_at, M.r_max)
                                  : RegionSpec::interval(M.r_min, r_at);
    const double v = volume(M, ball).value;
    out.values.push_back(v / std::pow(rho, M.m));
  }
  auto fit = fit_loglog(out.radii, out.values);
  out.fitted_exponent = fit.slope;

  const double euclid = unit_ball_volume(M.m);
  const double min_value = *std::min_element(out.values.begin(), out.values.end());
  if (min_value > 0.05 * euclid && fit.slope < 0.25) {
    out.classification = DensityClass::settled;
  } else if (fit.slope > 0.5) {
    out.classification = DensityClass::unsettled;
  } else {
    out.classification = DensityClass::inconclusive;
    out.note = "flat-but-small density trend; refusing to classify";
  }
  return out;
}

CurvatureSample curvature_profile(const RotSymManifold& M, double r) {
  CurvatureSample c;
  const double f = M.f->value(r);
  const double h = M.h->value(r);
  const double fp = M.f->deriv1(r);
  const double fpp = M.f->deriv2(r);
  const double hp = M.h->deriv1(r);
  if (!(f > 0.0) || !(h > 0.0)) throw ManifoldError("curvature needs f, h > 0 at r");
  const double f_s = fp / h;
  const double f_ss = (fpp * h - fp * hp) / (h * h * h);
  c.K_rad = -f_ss / f;
  c.K_tan = (1.0 - f_s * f_s) / (f * f);
  c.Ric_rad = (M.m - 1) * c.K_rad;
  c.Ric_tan = c.K_rad + (M.m - 2) * c.K_tan;
  c.on_blend = M.f->on_blend(r) || M.h->on_blend(r);
  return c;
}

EpsilonResult metric_ratio_epsilon(const RotSymManifold& M1, const RotSymManifold& M2,
                                   const RegionSpec& R, int samples) {
  EpsilonResult out;
  auto worst_ratio = [&](double r) -> double {
    const double f1 = M1.f->value(r), f2 = M2.f->value(r);
    const double h1 = M1.h->value(r), h2 = M2.h->value(r);
    double worst = 1.0;
    auto acc = [&](double x, double y) {
      if (y == 0.0 && x == 0.0) return;  // both degenerate: ratio 1
      if (y <= 0.0 || x <= 0.0 || !std::isfinite(x / y)) {
        worst = std::numeric_limits<double>::infinity();
        return;
      }
      worst = std::max({worst, x / y, y / x});
    };
    acc(f1, f2);
    acc(h1, h2);
    return worst;
  };

  double best = 1.0, best_r = R.min();
  for (const auto& iv : R.intervals) {
    if (!(iv.b > iv.a)) continue;
    for (int i = 0; i <= samples; ++i) {
      const double r = iv.a + (iv.b - iv.a) * i / samples;
      const double w = worst_ratio(r);
      if (w > best) {
        best = w;
        best_r = r;
      }
    }
    if (!std::isfinite(best)) break;
  }
  if (!std::isfinite(best)) {
    out.bi_lipschitz = false;
    out.note = "not bi-Lipschitz on region";
    out.epsilon = std::numeric_limits<double>::infinity();
    out.argmax_r = best_r;
    return out;
  }
  // Local refinement around the sampled arg-max.
  for (const auto& iv : R.intervals) {
    if (best_r >= iv.a && best_r <= iv.b) {
      const double step = (iv.b - iv.a) / samples;
      auto [x, v] = golden_max(worst_ratio, std::max(iv.a, best_r - step),
                               std::min(iv.b, best_r + step));
      if (v > best) {
        best = v;
        best_r = x;
      }
    }
  }
  out.epsilon = best - 1.0;
  out.argmax_r = best_r;
  return out;
}

double FlatModelSpace::distance(double x1, double y1, double x2, double y2) const {
  double dx = std::abs(x2 - x1);
  double dy = std::abs(y2 - y1);
  if (kind == Kind::flat_torus) {
    dx = std::min(dx, side - dx);
    dy = std::min(dy, side - dy);
  }
  return std::hypot(dx, dy);
}

double FlatModelSpace::diameter() const {
  if (kind == Kind::flat_torus) return std::hypot(side / 2.0, side / 2.0);
  return std::hypot(side, side);
}

}  // namespace ghflat
