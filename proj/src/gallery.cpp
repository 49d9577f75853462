#include "ghflat/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "ghflat/bridge.hpp"
#include "ghflat/geodesic.hpp"

namespace ghflat {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const double kPi = M_PI;

ProfilePtr expr_profile(const std::string& text, double lo, double hi) {
  return std::make_shared<ExprProfile>(parse_profile(text), lo, hi);
}

// Numeric-derivative wrapper for composite constructions.
ProfilePtr fd_profile(std::function<double(double)> value, double lo, double hi) {
  auto v = value;
  auto d1 = [v, lo, hi](double r) {
    double s = std::min(1e-5, 0.25 * (hi - lo));
    s = std::min({s, std::max(r - lo, 1e-9), std::max(hi - r, 1e-9)});
    return (v(r + s) - v(r - s)) / (2.0 * s);
  };
  auto d2 = [v, lo, hi](double r) {
    double s = std::min(1e-4, 0.25 * (hi - lo));
    s = std::min({s, std::max(r - lo, 1e-7), std::max(hi - r, 1e-7)});
    return (v(r + s) - 2.0 * v(r) + v(r - s)) / (s * s);
  };
  return std::make_shared<FunctionProfile>(v, d1, d2, lo, hi);
}

std::vector<double> merged_knots(const ProfilePtr& a, const ProfilePtr& b,
                                 std::vector<double> extra = {}) {
  std::vector<double> out = extra;
  for (const ProfilePtr& p : {a, b}) {
    if (!p) continue;
    auto k = p->knots();
    out.insert(out.end(), k.begin(), k.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// w1 * p1 + w2 * p2 with exact derivative composition.
ProfilePtr combine(double w1, ProfilePtr p1, double w2, ProfilePtr p2) {
  const double lo = p1->domain_min(), hi = p1->domain_max();
  return std::make_shared<FunctionProfile>(
      [=](double r) { return w1 * p1->value(r) + w2 * p2->value(r); },
      [=](double r) { return w1 * p1->deriv1(r) + w2 * p2->deriv1(r); },
      [=](double r) { return w1 * p1->deriv2(r) + w2 * p2->deriv2(r); }, lo, hi,
      merged_knots(p1, p2));
}

// sin(map(r)) with exact chain rule.
ProfilePtr sine_of(ProfilePtr map) {
  const double lo = map->domain_min(), hi = map->domain_max();
  return std::make_shared<FunctionProfile>(
      [=](double r) { return std::sin(map->value(r)); },
      [=](double r) { return std::cos(map->value(r)) * map->deriv1(r); },
      [=](double r) {
        const double m = map->value(r), d = map->deriv1(r);
        return -std::sin(m) * d * d + std::cos(m) * map->deriv2(r);
      },
      lo, hi, map->knots());
}

// Derivative of a map as a profile (metric coefficient h = map'); the second
// derivative of the result (map''') falls back to finite differences.
ProfilePtr derivative_of(ProfilePtr map) {
  const double lo = map->domain_min(), hi = map->domain_max();
  return std::make_shared<FunctionProfile>(
      [=](double r) { return map->deriv1(r); }, [=](double r) { return map->deriv2(r); },
      [=](double r) {
        double s = std::min(1e-5, 0.25 * (hi - lo));
        s = std::min({s, std::max(r - lo, 1e-9), std::max(hi - r, 1e-9)});
        return (map->deriv2(r + s) - map->deriv2(r - s)) / (2.0 * s);
      },
      lo, hi, map->knots());
}

struct QuinticPatch {
  double a, b;
  double c[6];
  double eval(double r, int deriv) const {
    const double w = b - a;
    const double u = (r - a) / w;
    double acc = 0.0;
    switch (deriv) {
      case 0:
        for (int k = 5; k >= 0; --k) acc = acc * u + c[k];
        return acc;
      case 1:
        for (int k = 5; k >= 1; --k) acc = acc * u + k * c[k];
        return acc / w;
      default:
        for (int k = 5; k >= 2; --k) acc = acc * u + k * (k - 1) * c[k];
        return acc / (w * w);
    }
  }
};

QuinticPatch make_quintic(double a, double b, double v0, double d0, double s0, double v1, double d1,
                          double s1) {
  QuinticPatch p;
  p.a = a;
  p.b = b;
  const double w = b - a;
  const double D0 = d0 * w, D1 = d1 * w, S0 = s0 * w * w, S1 = s1 * w * w;
  p.c[0] = v0;
  p.c[1] = D0;
  p.c[2] = 0.5 * S0;
  p.c[3] = -10.0 * v0 - 6.0 * D0 - 1.5 * S0 + 10.0 * v1 - 4.0 * D1 + 0.5 * S1;
  p.c[4] = 15.0 * v0 + 8.0 * D0 + 1.5 * S0 - 15.0 * v1 + 7.0 * D1 - S1;
  p.c[5] = -6.0 * v0 - 3.0 * D0 - 0.5 * S0 + 6.0 * v1 - 3.0 * D1 + 0.5 * S1;
  return p;
}

// base on [lo, a], patch on [b, hi], C^2 quintic bridge on [a, b].
ProfilePtr patched_profile(ProfilePtr base, ProfilePtr patch, double a, double b) {
  const double lo = base->domain_min();
  const double hi = patch->domain_max();
  QuinticPatch q = make_quintic(a, b, base->value(a), base->deriv1(a), base->deriv2(a),
                                patch->value(b), patch->deriv1(b), patch->deriv2(b));
  auto pick = [=](double r, int d) -> double {
    if (r < a) return d == 0 ? base->value(r) : d == 1 ? base->deriv1(r) : base->deriv2(r);
    if (r >= b) return d == 0 ? patch->value(r) : d == 1 ? patch->deriv1(r) : patch->deriv2(r);
    return q.eval(r, d);
  };
  return std::make_shared<FunctionProfile>([=](double r) { return pick(r, 0); },
                                           [=](double r) { return pick(r, 1); },
                                           [=](double r) { return pick(r, 2); }, lo, hi,
                                           merged_knots(base, patch, {a, b}));
}

// ---------------------------------------------------------------------------
// Shared closed forms

PiecewisePtr cone_limit_f() {
  // sin(r) on [0, pi/2], -(2/pi)(r - pi) on [3pi/4, pi], quintic bridge.
  return build_piecewise(
      {{0.0, kPi / 2.0, "sin(r)"},
       {3.0 * kPi / 4.0, kPi, "-(2/" + fmt(kPi) + ")*(r-" + fmt(kPi) + ")"}},
      {{5.0 * kPi / 8.0, BlendKind::quintic, kPi / 8.0}});
}

PiecewisePtr cusp_limit_f() {
  return build_piecewise(
      {{0.0, kPi / 2.0, "sin(r)"},
       {3.0 * kPi / 4.0, kPi, "(4/" + fmt(kPi * kPi) + ")*(r-" + fmt(kPi) + ")^2"}},
      {{5.0 * kPi / 8.0, BlendKind::quintic, kPi / 8.0}});
}

PiecewisePtr flamenco_limit_f() {
  return build_piecewise(
      {{0.0, kPi / 2.0, "sin(r)"},
       {kPi / 2.0 + 0.5, kPi, "(" + fmt(kPi) + "-r)^(-0.25)"}},
      {{kPi / 2.0 + 0.25, BlendKind::quintic, 0.25}});
}

RotSymManifold round_sphere(int m = 3) {
  RotSymManifold M;
  M.m = m;
  M.r_min = 0.0;
  M.r_max = kPi;
  M.f = expr_profile("sin(r)", 0.0, kPi);
  M.h = constant_profile(1.0, 0.0, kPi);
  M.pole_min = M.pole_max = true;
  M.name = "round-sphere";
  return M;
}

// Spline stretch factor 1 + amp * exp((1/(2i))^2 / ((r-A)(r-B))) on [A, B).
PiecewisePtr spline_h(int i, double amp) {
  const double A = kPi - 2.0 / i;
  const double B = kPi - 1.0 / i;
  const double c = 1.0 / (4.0 * double(i) * i);
  const std::string bump =
      "1+" + fmt(amp) + "*exp(" + fmt(c) + "/((r-" + fmt(A) + ")*(r-" + fmt(B) + ")))";
  return build_piecewise({{0.0, A, "1"}, {A, B, bump}, {B, kPi, "1"}}, {});
}

// ---------------------------------------------------------------------------
// Mollification

namespace bump {

double raw(double y) {
  const double u = 1.0 - y * y;
  if (u <= 0.0) return 0.0;
  return std::exp(-1.0 / u);
}

double g1(double y) {  // d/dy log(raw)
  const double u = 1.0 - y * y;
  return -2.0 * y / (u * u);
}

double g2(double y) {
  const double u = 1.0 - y * y;
  return -2.0 / (u * u) - 8.0 * y * y / (u * u * u);
}

double normalization() {
  static const double C = [] {
    auto q = integrate([](double y) { return raw(y); }, -1.0, 1.0);
    return 1.0 / q.value;
  }();
  return C;
}

double kernel(double y, int deriv) {
  const double C = normalization();
  const double f = C * raw(y);
  switch (deriv) {
    case 0: return f;
    case 1: return f * g1(y);
    default: return f * (g1(y) * g1(y) + g2(y));
  }
}

}  // namespace bump

}  // namespace

MollifiedProfile::MollifiedProfile(std::function<double(double)> base,
                                   std::vector<double> base_kinks, double width, double lo,
                                   double hi)
    : base_(std::move(base)), kinks_(std::move(base_kinks)), width_(width), lo_(lo), hi_(hi) {
  if (!(width > 0.0)) throw std::invalid_argument("mollify: width must be > 0");
}

double MollifiedProfile::convolve(double r, int kd) const {
  // integral over y in (-1, 1) of phi^{(kd)}(y) * base(r - w y), split at the
  // base's kinks mapped into the y variable.
  std::vector<double> cuts{-1.0, 1.0};
  for (double k : kinks_) {
    const double y = (r - k) / width_;
    if (y > -1.0 && y < 1.0) cuts.push_back(y);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  QuadratureOptions q;
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-9;
  q.singular_endpoints = false;  // kernel vanishes to all orders at +-1
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    auto res = integrate(
        [&](double y) { return bump::kernel(y, kd) * base_(r - width_ * y); }, cuts[s],
        cuts[s + 1], q);
    total += res.value;
  }
  return total / std::pow(width_, kd);
}

double MollifiedProfile::value(double r) const { return convolve(r, 0); }
double MollifiedProfile::deriv1(double r) const { return convolve(r, 1); }
double MollifiedProfile::deriv2(double r) const { return convolve(r, 2); }

double MollifiedProfile::kernel_mass() {
  auto q = integrate([](double y) { return bump::kernel(y, 0); }, -1.0, 1.0);
  return q.value;
}

ProfilePtr mollify(std::function<double(double)> base, std::vector<double> base_kinks, double width,
                   double lo, double hi) {
  return std::make_shared<MollifiedProfile>(std::move(base), std::move(base_kinks), width, lo, hi);
}

double smoothstep_bump(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double spline_bump_integral() {
  static const double L = [] {
    auto q = integrate([](double u) { return std::exp(1.0 / (4.0 * u * (u - 1.0))); }, 0.0, 1.0);
    return q.value;
  }();
  return L;
}

SplineLengthReport spline_length_reconciliation(int i) {
  SplineLengthReport out;
  RotSymManifold M = build_example("ex-not-GH", i);
  out.direct = radial_length(M, kPi - 2.0 / i, kPi - 1.0 / i).value;
  out.substituted_form = 1.0 + spline_bump_integral();
  out.mismatch_flagged = std::abs(out.direct - out.substituted_form) > 1e-6;
  return out;
}

// ---------------------------------------------------------------------------
// Example registry

namespace {

// ex-not-connected warping profile.
ProfilePtr not_connected_f(int i) {
  const double w = 1.0 / i;
  auto abs_sin2 = [](double x) { return std::abs(std::sin(2.0 * x)); };
  std::vector<double> kinks;
  for (int k = -2; k <= 4; ++k) kinks.push_back(k * kPi / 2.0);
  auto smooth = std::make_shared<MollifiedProfile>(abs_sin2, kinks, w, 0.0, kPi);
  auto psi = [](double r) {
    const double up = smoothstep_bump((r - kPi / 8.0) / (kPi / 8.0));
    const double down = smoothstep_bump((7.0 * kPi / 8.0 - r) / (kPi / 8.0));
    return up * down;
  };
  const double mix = (i - 1.0) / (2.0 * i);
  auto value = [=](double r) {
    const double p = psi(r);
    return std::sin(r) / i + mix * ((1.0 - p) * abs_sin2(r) + p * smooth->value(r));
  };
  return fd_profile(value, 0.0, kPi);
}

// ex-to-hemisphere reparametrization map h_i : [0, pi] -> [0, pi].
PiecewisePtr hemisphere_map(int i) {
  const double c = (kPi / 2.0) / (kPi - kPi / (2.0 * i));
  const double sigma = 1.0 / (2.0 * i);
  std::vector<std::tuple<double, double, std::string>> pieces = {
      {0.0, kPi - 1.0 / i, fmt(c) + "*r"},
      {kPi - 0.5 / i, kPi, fmt(kPi) + "+" + fmt(sigma) + "*(r-" + fmt(kPi) + ")"}};
  std::vector<BlendSpec> blends = {{kPi - 0.75 / i, BlendKind::monotone_cubic, 0.25 / i}};
  return build_piecewise(pieces, blends);
}

// Double-torpedo profile on [0, L]: C^1 cap | cylinder | cap.
PiecewisePtr torpedo_f(double L) {
  return build_piecewise({{0.0, kPi / 2.0, "sin(r)"},
                          {kPi / 2.0, L - kPi / 2.0, "1"},
                          {L - kPi / 2.0, L, "sin(" + fmt(kPi - L) + "+r)"}},
                         {});
}

// ex-diam-now profile on [0, L]: cap | e^{-t} tail | far cap, C^2 blends.
ProfilePtr diam_now_f(double L) {
  auto head = expr_profile("sin(r)", 0.0, kPi / 2.0);
  auto tail = expr_profile("exp(-r)", 0.0, L);
  auto head_tail = patched_profile(head, tail, kPi / 2.0, kPi);
  // Far cap radius eps with sin(eps) = e^{-(L - 2 eps)}.
  const double eps = brent_root(
      [&](double e) { return std::sin(e) - std::exp(-(L - 2.0 * e)); }, 1e-9, 0.5);
  auto cap = sine_of(std::make_shared<ExprProfile>(
      parse_profile(fmt(kPi - L) + "+r"), L - eps, L));
  return patched_profile(head_tail, cap, L - 2.0 * eps, L - eps);
}

double torpedo_length(int i) { return i + kPi / 2.0 + 1.0; }

std::map<std::string, ExampleSpec> build_registry() {
  std::map<std::string, ExampleSpec> reg;

  {  // ex-region: constant round spheres; singular set is a closed ball.
    ExampleSpec ex;
    ex.name = "ex-region";
    ex.singular_set = "region: closed ball of radius pi/16 about p0 (codimension 0)";
    ex.summary = "constant sequence of round spheres; the smooth limit away from a ball "
                 "forgets the ball";
    ex.generator = [](int) { return round_sphere(); };
    ex.limit = [] {
      RotSymManifold M = round_sphere();
      M.r_max = kPi - kPi / 16.0;
      M.pole_max = false;
      M.f = expr_profile("sin(r)", 0.0, M.r_max);
      M.h = constant_profile(1.0, 0.0, M.r_max);
      M.name = "ex-region-limit";
      return M;
    };
    ex.exhaustion = [](int j, int) {
      return RegionSpec::interval(0.0, kPi - kPi / 16.0 - 1.0 / j);
    };
    reg[ex.name] = ex;
  }

  {  // ex-cone
    ExampleSpec ex;
    ex.name = "ex-cone";
    ex.singular_set = "point: p0 at r=pi (conical tip)";
    ex.summary = "metrics forming a conical singularity; completion keeps the tip";
    ex.generator = [](int i) {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = combine(1.0 / i, expr_profile("sin(r)", 0.0, kPi), 1.0 - 1.0 / i, cone_limit_f());
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.claim_smooth_max = false;
      M.name = "ex-cone-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = cone_limit_f();
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.claim_smooth_max = false;
      M.name = "ex-cone-limit";
      return M;
    };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 1.0 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-cusp
    ExampleSpec ex;
    ex.name = "ex-cusp";
    ex.singular_set = "point: p0 at r=pi (cusp tip)";
    ex.summary = "metrics forming a cusp; settled completion drops the tip";
    ex.generator = [](int i) {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = combine(1.0 / i, expr_profile("sin(r)", 0.0, kPi), 1.0 - 1.0 / i, cusp_limit_f());
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.claim_smooth_max = false;
      M.name = "ex-cusp-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = cusp_limit_f();
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.claim_smooth_max = false;
      M.name = "ex-cusp-limit";
      return M;
    };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 1.0 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-not-connected
    ExampleSpec ex;
    ex.name = "ex-not-connected";
    ex.singular_set = "codim-1 submanifold: equator sphere at r=pi/2";
    ex.summary = "equator pinches; the regular part disconnects into two spheres";
    ex.i_min = 2;
    ex.exhaustion_connected = false;
    ex.generator = [](int i) {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = not_connected_f(i);
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.name = "ex-not-connected-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = expr_profile("abs(sin(2*r))/2", 0.0, kPi);
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.name = "ex-not-connected-limit";
      return M;
    };
    ex.exhaustion = [](int j, int) {
      RegionSpec R;
      R.intervals = {{0.0, kPi / 2.0 - 1.0 / (j + 1)}, {kPi / 2.0 + 1.0 / (j + 1), kPi}};
      return R;
    };
    reg[ex.name] = ex;
  }

  {  // ex-not-F (bubbling)
    ExampleSpec ex;
    ex.name = "ex-not-F";
    ex.singular_set = "point: p0 at r=pi";
    ex.summary = "a second unit sphere hides behind a shrinking neck";
    ex.generator = [](int i) {
      const double a = kPi - kPi / (10.0 * i);
      const double b = a + kPi / (100.0 * double(i) * i);
      const double k = 10.0 * i;
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = build_piecewise(
          {{0.0, a, "sin(r)"}, {b, kPi, "sin(" + fmt(k) + "*(" + fmt(kPi) + "-r))"}},
          {{0.5 * (a + b), BlendKind::quintic, 0.5 * (b - a)}});
      M.h = build_piecewise({{0.0, a, "1"}, {b, kPi, fmt(k)}},
                            {{0.5 * (a + b), BlendKind::quintic, 0.5 * (b - a)}});
      M.pole_min = M.pole_max = true;
      M.name = "ex-not-F-" + std::to_string(i);
      return M;
    };
    ex.limit = [] { return round_sphere(); };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 1.0 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-to-hemisphere
    ExampleSpec ex;
    ex.name = "ex-to-hemisphere";
    ex.singular_set = "point: p0 at r=pi";
    ex.summary = "round spheres whose charts squeeze half the volume into a vanishing collar";
    ex.generator = [](int i) {
      auto map = hemisphere_map(i);
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = sine_of(map);
      M.h = derivative_of(map);
      M.pole_min = M.pole_max = true;
      M.name = "ex-to-hemisphere-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = expr_profile("sin(r/2)", 0.0, kPi);
      M.h = constant_profile(0.5, 0.0, kPi);
      M.pole_min = true;
      M.pole_max = false;  // r=pi is the equator of the limiting hemisphere
      M.name = "ex-to-hemisphere-limit";
      return M;
    };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 1.0 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-cap-cyl (double torpedo), arclength presentation
    ExampleSpec ex;
    ex.name = "ex-cap-cyl";
    ex.singular_set = "point: p0 at the far pole";
    ex.summary = "nonnegative Ricci, volume blowing up along a growing cylinder";
    ex.i_min = 3;
    ex.generator = [](int i) {
      const double L = torpedo_length(i);
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = L;
      M.f = torpedo_f(L);
      M.h = constant_profile(1.0, 0.0, L);
      M.pole_min = M.pole_max = true;
      M.name = "ex-cap-cyl-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      const double R_cut = 24.0;
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = R_cut;
      M.f = build_piecewise({{0.0, kPi / 2.0, "sin(r)"}, {kPi / 2.0, R_cut, "1"}}, {});
      M.h = constant_profile(1.0, 0.0, R_cut);
      M.pole_min = true;
      M.name = "ex-cap-cyl-limit";
      return M;
    };
    ex.exhaustion = [](int j, int i) {
      const double L = torpedo_length(i);
      return RegionSpec::interval(0.0, std::min(double(j), L - kPi));
    };
    reg[ex.name] = ex;
  }

  {  // ex-diam-now
    ExampleSpec ex;
    ex.name = "ex-diam-now";
    ex.singular_set = "point: p0 at the far pole";
    ex.summary = "sectional curvature bounded below, diameter diverging along a cusp";
    ex.i_min = 4;
    ex.generator = [](int i) {
      const double L = torpedo_length(i);
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = L;
      M.f = diam_now_f(L);
      M.h = constant_profile(1.0, 0.0, L);
      M.pole_min = M.pole_max = true;
      M.name = "ex-diam-now-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      const double R_cut = 24.0;
      auto head = expr_profile("sin(r)", 0.0, kPi / 2.0);
      auto tail = expr_profile("exp(-r)", 0.0, R_cut);
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = R_cut;
      M.f = patched_profile(head, tail, kPi / 2.0, kPi);
      M.h = constant_profile(1.0, 0.0, R_cut);
      M.pole_min = true;
      M.name = "ex-diam-now-limit";
      return M;
    };
    ex.exhaustion = [](int j, int i) {
      const double L = torpedo_length(i);
      return RegionSpec::interval(0.0, std::min(double(j), L - kPi));
    };
    reg[ex.name] = ex;
  }

  {  // ex-not-GH (single spline of fixed length)
    ExampleSpec ex;
    ex.name = "ex-not-GH";
    ex.singular_set = "point: p0 at r=pi";
    ex.summary = "thin spline of persistent length; GH and flat limits disagree";
    ex.i_min = 2;
    ex.generator = [](int i) {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = expr_profile("sin(r)", 0.0, kPi);
      M.h = spline_h(i, double(i));
      M.pole_min = M.pole_max = true;
      M.name = "ex-not-GH-" + std::to_string(i);
      return M;
    };
    ex.limit = [] { return round_sphere(); };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 0.5 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-no-GH: quantity-only fidelity
    ExampleSpec ex;
    ex.name = "ex-no-GH";
    ex.fidelity = Fidelity::quantity_only;
    ex.singular_set = "point: p0 at r=pi";
    ex.summary = "i splines of fixed length; ball packing at radius L/2 diverges";
    ex.i_min = 2;
    reg[ex.name] = ex;
  }

  {  // ex-not-bounded (spline of growing length)
    ExampleSpec ex;
    ex.name = "ex-not-bounded";
    ex.singular_set = "point: p0 at r=pi";
    ex.summary = "spline length i*L; diameter diverges while volumes stay bounded";
    ex.i_min = 2;
    ex.generator = [](int i) {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = expr_profile("sin(r)", 0.0, kPi);
      M.h = spline_h(i, double(i) * i);
      M.pole_min = M.pole_max = true;
      M.name = "ex-not-bounded-" + std::to_string(i);
      return M;
    };
    ex.limit = [] { return round_sphere(); };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 0.5 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-flamenco (unbounded boundary areas)
    ExampleSpec ex;
    ex.name = "ex-flamenco";
    ex.singular_set = "point: p0 at r=pi";
    ex.summary = "finite volume, flaring boundary spheres of unbounded area";
    ex.i_min = 2;
    ex.generator = [](int i) {
      auto base = flamenco_limit_f();
      auto cap = expr_profile("sin(r)", kPi - 1.0, kPi);
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = patched_profile(base, cap, kPi - 1.0 / i, kPi - 0.5 / i);
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = M.pole_max = true;
      M.name = "ex-flamenco-" + std::to_string(i);
      return M;
    };
    ex.limit = [] {
      RotSymManifold M;
      M.m = 3;
      M.r_min = 0.0;
      M.r_max = kPi;
      M.f = flamenco_limit_f();
      M.h = constant_profile(1.0, 0.0, kPi);
      M.pole_min = true;
      M.pole_max = false;  // f blows up toward r=pi
      M.name = "ex-flamenco-limit";
      return M;
    };
    ex.exhaustion = [](int j, int) { return RegionSpec::interval(0.0, kPi - 1.0 / j); };
    reg[ex.name] = ex;
  }

  {  // ex-to-torus-square
    ExampleSpec ex;
    ex.name = "ex-to-torus-square";
    ex.fidelity = Fidelity::flat;
    ex.singular_set = "codim-1 submanifold: two circles (S1 x {0}) u ({0} x S1) in T^2";
    ex.summary = "flat tori; the exhaustion squares converge to the square, not the torus";
    ex.flat_generator = [](int) { return FlatModelSpace::torus(2.0 * kPi); };
    ex.flat_limit = [] { return FlatModelSpace::square(2.0 * kPi); };
    reg[ex.name] = ex;
  }

  return reg;
}

const std::map<std::string, ExampleSpec>& registry() {
  static const std::map<std::string, ExampleSpec> reg = build_registry();
  return reg;
}

}  // namespace

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {
      "ex-region",       "ex-cone",        "ex-cusp",       "ex-not-connected", "ex-not-F",
      "ex-to-hemisphere", "ex-cap-cyl",    "ex-diam-now",   "ex-not-GH",        "ex-no-GH",
      "ex-not-bounded",  "ex-flamenco",    "ex-to-torus-square"};
  return names;
}

bool gallery_has(const std::string& name) { return registry().count(name) > 0; }

const ExampleSpec& gallery_example(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown example '" + name + "'");
  return it->second;
}

RotSymManifold build_example(const std::string& name, int i) {
  const ExampleSpec& ex = gallery_example(name);
  if (ex.fidelity != Fidelity::full)
    throw std::invalid_argument(name + " has no full-fidelity manifold family");
  if (i < ex.i_min) throw std::invalid_argument(name + ": index below declared range");
  RotSymManifold M = ex.generator(i);
  validate(M);
  return M;
}

RotSymManifold build_example_limit(const std::string& name) {
  const ExampleSpec& ex = gallery_example(name);
  if (!ex.limit) throw std::invalid_argument(name + " has no full-fidelity limit");
  return ex.limit();
}

std::string example_to_json(const std::string& name, int i) {
  const ExampleSpec& ex = gallery_example(name);
  if (ex.fidelity != Fidelity::full)
    throw std::invalid_argument(name + " is not exportable as a profile file");
  RotSymManifold M = ex.generator(i);

  auto to_piecewise_json = [](const ProfilePtr& p) -> std::string {
    if (auto* pw = dynamic_cast<const PiecewiseProfile*>(p.get())) return piecewise_to_json(*pw);
    if (auto* ep = dynamic_cast<const ExprProfile*>(p.get())) {
      std::vector<std::tuple<double, double, std::string>> pieces = {
          {ep->domain_min(), ep->domain_max(), ep->expr().source_text}};
      return piecewise_to_json(*build_piecewise(pieces));
    }
    // Sampled export for profiles outside the grammar: dense linear pieces.
    const int n = 256;
    const double lo = p->domain_min(), hi = p->domain_max();
    std::vector<std::tuple<double, double, std::string>> pieces;
    for (int k = 0; k < n; ++k) {
      const double a = lo + (hi - lo) * k / n;
      const double b = lo + (hi - lo) * (k + 1) / n;
      const double va = p->value(a), vb = p->value(b);
      const double slope = (vb - va) / (b - a);
      pieces.emplace_back(a, b, fmt(va) + "+" + fmt(slope) + "*(r-" + fmt(a) + ")");
    }
    return piecewise_to_json(*build_piecewise(pieces));
  };

  std::ostringstream os;
  os << "{\n  \"name\": \"" << name << "-" << i << "\",\n  \"m\": " << M.m
     << ",\n  \"domain\": [" << fmt(M.r_min) << ", " << fmt(M.r_max) << "],\n  \"poles\": {\"min\": "
     << (M.pole_min ? "true" : "false") << ", \"max\": " << (M.pole_max ? "true" : "false")
     << "},\n  \"f\": " << to_piecewise_json(M.f) << ",\n  \"h\": " << to_piecewise_json(M.h)
     << "\n}\n";
  return os.str();
}

}  // namespace ghflat
