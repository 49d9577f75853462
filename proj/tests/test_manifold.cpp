#include <cmath>

#include "doctest.h"
#include "ghflat/gallery.hpp"
#include "ghflat/manifold.hpp"

using namespace ghflat;

TEST_SUITE_BEGIN("manifold");

namespace {

const double kPi = M_PI;

RotSymManifold sphere() { return build_example("ex-region", 1); }  // round S^3

RotSymManifold cylinder() {
  RotSymManifold M;
  M.m = 3;
  M.r_min = 0.0;
  M.r_max = 4.0;
  M.f = constant_profile(1.0, 0.0, 4.0);
  M.h = constant_profile(1.0, 0.0, 4.0);
  return M;
}

RotSymManifold scaled(const RotSymManifold& M, double c) {
  RotSymManifold out = M;
  out.f = std::make_shared<FunctionProfile>(
      [f = M.f, c](double r) { return c * f->value(r); },
      [f = M.f, c](double r) { return c * f->deriv1(r); },
      [f = M.f, c](double r) { return c * f->deriv2(r); }, M.r_min, M.r_max);
  out.h = std::make_shared<FunctionProfile>(
      [h = M.h, c](double r) { return c * h->value(r); },
      [h = M.h, c](double r) { return c * h->deriv1(r); },
      [h = M.h, c](double r) { return c * h->deriv2(r); }, M.r_min, M.r_max);
  return out;
}

}  // namespace

TEST_CASE("unit sphere constants") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2 * kPi));        // circle
  CHECK(unit_sphere_area(2) == doctest::Approx(4 * kPi));        // S^2
  CHECK(unit_sphere_area(3) == doctest::Approx(2 * kPi * kPi));  // S^3
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
}

TEST_CASE("volume: round S^3 is 2 pi^2, degenerate regions vanish") {
  RotSymManifold M = sphere();
  CHECK(volume(M, M.full_region()).value == doctest::Approx(2 * kPi * kPi).epsilon(1e-9));
  CHECK(volume(M, RegionSpec::interval(1.0, 1.0)).value == 0.0);
}

TEST_CASE("volume additivity over disjoint regions") {
  RotSymManifold M = sphere();
  const double a = volume(M, RegionSpec::interval(0.0, 1.0)).value;
  const double b = volume(M, RegionSpec::interval(1.0, kPi)).value;
  const double whole = volume(M, M.full_region()).value;
  CHECK(std::abs(whole - a - b) <= 2e-9);
}

TEST_CASE("flamenco volume is finite despite the flare") {
  RotSymManifold N = build_example_limit("ex-flamenco");
  auto v = volume(N, N.full_region());
  CHECK(v.converged);
  CHECK(v.value > 0.0);
  CHECK(v.value < 100.0);
  // integrand near pi is omega_2 (pi-r)^(-1/2): integrable, and the closed
  // form of that tail gives 4 pi * 2 sqrt(pi - a) on [a, pi).
  const double a = kPi - 0.25;
  const double tail = volume(N, RegionSpec::interval(a, kPi)).value;
  CHECK(tail == doctest::Approx(4 * kPi * 2 * std::sqrt(kPi - a)).epsilon(1e-6));
}

TEST_CASE("boundary areas are closed-form") {
  RotSymManifold M = sphere();
  CHECK(boundary_area(M, kPi / 2) == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(boundary_area(M, kPi) == doctest::Approx(0.0));
  RotSymManifold N = build_example_limit("ex-flamenco");
  for (int j : {4, 16, 64})
    CHECK(boundary_area(N, kPi - 1.0 / j) ==
          doctest::Approx(4 * kPi * std::sqrt(double(j))).epsilon(1e-12));
}

TEST_CASE("radial length") {
  RotSymManifold M = sphere();
  CHECK(radial_length(M, 0.0, kPi).value == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(radial_length(M, 1.0, 1.0).value == 0.0);
  // monotone in interval inclusion
  CHECK(radial_length(M, 0.5, 2.0).value <= radial_length(M, 0.25, 2.25).value);
  RotSymManifold G = build_example("ex-not-GH", 10);
  const double L = spline_bump_integral();
  CHECK(radial_length(G, kPi - 0.2, kPi - 0.1).value ==
        doctest::Approx(0.1 + L).epsilon(1e-6));
}

TEST_CASE("tip density: cone settles at 16/(3 pi)") {
  RotSymManifold N = build_example_limit("ex-cone");
  auto d = tip_density(N, true, dyadic_radii(0.64, 7));
  CHECK(d.classification == DensityClass::settled);
  CHECK(d.values.back() == doctest::Approx(16.0 / (3.0 * kPi)).epsilon(1e-6));
  CHECK(std::abs(d.fitted_exponent) < 0.05);
}

TEST_CASE("tip density: cusp decays with exponent 2") {
  RotSymManifold N = build_example_limit("ex-cusp");
  auto d = tip_density(N, true, dyadic_radii(0.64, 7));
  CHECK(d.classification == DensityClass::unsettled);
  CHECK(d.fitted_exponent == doctest::Approx(2.0).epsilon(0.02));
  CHECK(d.values.back() < 1e-2);
}

TEST_CASE("tip density: round sphere matches the Euclidean ball constant") {
  RotSymManifold M = sphere();
  auto d = tip_density(M, false, {0.2, 0.1, 0.05});
  CHECK(d.values.back() == doctest::Approx(4.0 * kPi / 3.0).epsilon(2e-3));
  CHECK(d.classification == DensityClass::settled);
}

TEST_CASE("tip density refuses to classify a borderline trend") {
  // f ~ s^{1.15} near the pole gives density ~ rho^{0.3}: too flat for
  // unsettled, too small and drifting for settled.
  RotSymManifold M;
  M.m = 3;
  M.r_min = 0.0;
  M.r_max = 1.0;
  M.f = std::make_shared<FunctionProfile>(
      [](double r) { return 0.05 * std::pow(1.0 - r, 1.15); },
      [](double r) { return -0.05 * 1.15 * std::pow(1.0 - r, 0.15); },
      [](double r) { return -0.05 * 1.15 * 0.15 * std::pow(1.0 - r, -0.85); }, 0.0, 1.0);
  M.h = constant_profile(1.0, 0.0, 1.0);
  M.pole_max = true;
  M.claim_smooth_max = false;
  auto d = tip_density(M, true, dyadic_radii(0.4, 7));
  CHECK(d.classification == DensityClass::inconclusive);
  CHECK(!d.note.empty());
}

TEST_CASE("curvature: round sphere and cylinder") {
  RotSymManifold M = sphere();
  auto c = curvature_profile(M, 1.0);
  CHECK(c.K_rad == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.K_tan == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c.Ric_rad == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c.Ric_tan == doctest::Approx(2.0).epsilon(1e-6));

  auto cc = curvature_profile(cylinder(), 2.0);
  CHECK(cc.K_rad == doctest::Approx(0.0));
  CHECK(cc.K_tan == doctest::Approx(1.0));
  CHECK(cc.Ric_rad == doctest::Approx(0.0));
  CHECK(cc.Ric_tan == doctest::Approx(1.0));
}

TEST_CASE("curvature matches a geodesic-deviation style finite-difference oracle") {
  // Oracle: K_rad = -f_ss/f and K_tan = (1 - f_s^2)/f^2 with f_s, f_ss taken
  // by second differences of f along arclength, independent of the symbolic
  // derivative path.
  RotSymManifold N = build_example_limit("ex-cone");
  for (int k = 1; k <= 16; ++k) {
    const double r = 0.2 + (kPi - 0.6) * k / 17.0;
    auto c = curvature_profile(N, r);
    const double s = 1e-4;
    const double f0 = N.f->value(r), fp = N.f->value(r + s), fm = N.f->value(r - s);
    const double f_s = (fp - fm) / (2 * s);
    const double f_ss = (fp - 2 * f0 + fm) / (s * s);
    CHECK(c.K_rad == doctest::Approx(-f_ss / f0).epsilon(1e-2));
    CHECK(c.K_tan == doctest::Approx((1 - f_s * f_s) / (f0 * f0)).epsilon(1e-2));
  }
}

TEST_CASE("double torpedo cap has Ricci = 2 on the cap and >= 0 everywhere") {
  RotSymManifold M = build_example("ex-cap-cyl", 6);
  auto cap = curvature_profile(M, 0.7);
  CHECK(cap.Ric_rad == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(cap.Ric_tan == doctest::Approx(2.0).epsilon(1e-9));
  for (int k = 1; k < 128; ++k) {
    const double r = M.r_min + (M.r_max - M.r_min) * k / 128.0;
    if (M.f->value(r) < 1e-6) continue;
    auto c = curvature_profile(M, r);
    CHECK(std::min(c.Ric_rad, c.Ric_tan) >= -1e-9);
  }
}

TEST_CASE("metric ratio epsilon") {
  RotSymManifold M = sphere();
  auto same = metric_ratio_epsilon(M, M, M.full_region());
  CHECK(same.epsilon == doctest::Approx(0.0));

  auto doubled = metric_ratio_epsilon(scaled(M, 2.0), M, RegionSpec::interval(0.2, 3.0));
  CHECK(doubled.epsilon == doctest::Approx(1.0).epsilon(1e-9));

  // symmetry is exact
  RotSymManifold Mi = build_example("ex-cone", 8);
  RotSymManifold N = build_example_limit("ex-cone");
  RegionSpec W = RegionSpec::interval(0.0, kPi - 0.25);
  CHECK(metric_ratio_epsilon(Mi, N, W).epsilon ==
        doctest::Approx(metric_ratio_epsilon(N, Mi, W).epsilon).epsilon(1e-12));

  // dense-sampling oracle at 4096 points, and the limit i -> infinity
  double brute = 0.0;
  for (int s = 0; s <= 4096; ++s) {
    const double r = W.min() + (W.max() - W.min()) * s / 4096.0;
    const double ratio = std::max(Mi.f->value(r) / N.f->value(r), N.f->value(r) / Mi.f->value(r));
    brute = std::max(brute, ratio - 1.0);
  }
  CHECK(metric_ratio_epsilon(Mi, N, W).epsilon == doctest::Approx(brute).epsilon(1e-4));
  CHECK(metric_ratio_epsilon(build_example("ex-cone", 64), N, W).epsilon <
        metric_ratio_epsilon(build_example("ex-cone", 8), N, W).epsilon);
}

TEST_CASE("unbounded ratio reports not bi-Lipschitz") {
  RotSymManifold M = sphere();
  RotSymManifold flat = cylinder();
  flat.r_max = kPi;
  flat.f = constant_profile(1.0, 0.0, kPi);
  flat.h = constant_profile(1.0, 0.0, kPi);
  auto res = metric_ratio_epsilon(M, flat, RegionSpec::interval(0.0, kPi));
  CHECK(!res.bi_lipschitz);
}

TEST_CASE("scaling covariance: c f, c h scales volume by c^m, area c^{m-1}, length c") {
  RotSymManifold M = sphere();
  const double c = 2.5;
  RotSymManifold Mc = scaled(M, c);
  CHECK(volume(Mc, Mc.full_region()).value ==
        doctest::Approx(std::pow(c, 3) * volume(M, M.full_region()).value).epsilon(1e-9));
  CHECK(boundary_area(Mc, 1.0) == doctest::Approx(c * c * boundary_area(M, 1.0)).epsilon(1e-12));
  CHECK(radial_length(Mc, 0.3, 2.0).value ==
        doctest::Approx(c * radial_length(M, 0.3, 2.0).value).epsilon(1e-12));
  CHECK(metric_ratio_epsilon(Mc, scaled(M, c), M.full_region()).epsilon ==
        doctest::Approx(0.0));
  auto k = curvature_profile(M, 1.2);
  auto kc = curvature_profile(Mc, 1.2);
  CHECK(kc.K_rad * c * c == doctest::Approx(k.K_rad).epsilon(1e-9));
  CHECK(kc.K_tan * c * c == doctest::Approx(k.K_tan).epsilon(1e-9));
}

TEST_CASE("validate rejects broken manifolds") {
  RotSymManifold M = sphere();
  M.pole_max = true;
  M.f = constant_profile(1.0, 0.0, kPi);  // pole flag but f != 0
  CHECK_THROWS_AS(validate(M), ManifoldError);
}

TEST_CASE("flat model distances satisfy the torus wraparound") {
  FlatModelSpace torus = FlatModelSpace::torus(2 * kPi);
  CHECK(torus.distance(0.1, 0.1, 2 * kPi - 0.1, 0.1) == doctest::Approx(0.2));
  FlatModelSpace square = FlatModelSpace::square(2 * kPi);
  CHECK(square.distance(0.0, 0.0, 2 * kPi, 2 * kPi) ==
        doctest::Approx(2 * std::sqrt(2.0) * kPi));
}

TEST_SUITE_END();
