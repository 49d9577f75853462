#include <cmath>
#include <random>

#include "doctest.h"
#include "ghflat/bounds.hpp"

using namespace ghflat;

TEST_SUITE_BEGIN("bounds");

namespace {
const double kPi = M_PI;
const double kStrict = 1e-6;

BoundInputs sample_inputs() {
  BoundInputs in;
  in.m = 3;
  in.eps = 0.3;
  in.D_U1 = 2.0;
  in.D_U2 = 2.5;
  in.lambda = 0.4;
  in.V1 = 10.0;
  in.V2 = 12.0;
  in.A1 = 3.0;
  in.A2 = 2.0;
  in.X1 = 0.7;
  in.X2 = 0.9;
  in.H1 = 0.2;
  in.H2 = 0.35;
  return in;
}

}  // namespace

TEST_CASE("squeeze: zero eps collapses every bound") {
  BoundInputs in;
  in.eps = 0.0;
  in.D_U1 = in.D_U2 = kPi;
  in.V1 = in.V2 = 5.0;
  in.A1 = in.A2 = 1.0;
  auto r = squeeze_bounds(in);
  CHECK(r.a == 0.0);
  CHECK(r.d_GH == 0.0);
  CHECK(r.d_F == 0.0);
  CHECK(r.d_sF == 0.0);
}

TEST_CASE("squeeze: the arccos(1/2) = pi/3 case, exact arithmetic") {
  BoundInputs in;
  in.m = 3;
  in.eps = 1.0;
  in.D_U1 = in.D_U2 = kPi;
  in.V1 = in.V2 = 2 * kPi * kPi;
  in.A1 = in.A2 = 0.0;
  auto r = squeeze_bounds(in);
  const double a = (1 + kStrict) * (kPi / 3.0);
  CHECK(r.a == doctest::Approx(a).epsilon(1e-15));
  CHECK(r.d_GH == doctest::Approx(a).epsilon(1e-15));
  CHECK(r.d_F == doctest::Approx(a * 4 * kPi * kPi).epsilon(1e-15));
  CHECK(r.d_sF == doctest::Approx(std::pow(a * 4 * kPi * kPi, 0.25)).epsilon(1e-15));
}

TEST_CASE("subdiffeo: trivial and forced-formula cases") {
  BoundInputs zero;
  zero.eps = 0.0;
  zero.lambda = 0.0;
  zero.D_U1 = zero.D_U2 = 1.0;
  auto r0 = subdiffeo_bounds(zero);
  CHECK(r0.d_GH == 0.0);
  CHECK(r0.d_F == 0.0);
  CHECK(r0.d_sF == 0.0);

  BoundInputs in;
  in.eps = 0.5;
  in.lambda = 0.0;
  in.D_U1 = 2.0;
  in.D_U2 = 1.0;
  auto r = subdiffeo_bounds(in);
  CHECK(r.h == 0.0);
  CHECK(r.hbar == doctest::Approx(std::sqrt(0.25 + 1.0) * 2.0).epsilon(1e-15));
}

TEST_CASE("subdiffeo reproduces the hand-evaluated formula at a full tuple") {
  BoundInputs in = sample_inputs();
  auto r = subdiffeo_bounds(in);
  const double maxD = 2.5;
  const double a = (1 + kStrict) * std::acos(1 / 1.3) / kPi * maxD;
  const double h = std::sqrt(0.4 * (maxD + 0.1));
  const double lip = std::sqrt(0.09 + 0.6);
  const double hbar = std::max({h, lip * 2.0, lip * 2.5});
  CHECK(r.a == doctest::Approx(a).epsilon(1e-15));
  CHECK(r.h == doctest::Approx(h).epsilon(1e-15));
  CHECK(r.hbar == doctest::Approx(hbar).epsilon(1e-15));
  CHECK(r.d_GH == doctest::Approx(a + 2 * hbar + 0.35).epsilon(1e-15));
  CHECK(r.d_F == doctest::Approx((2 * hbar + a) * 27.0 + 1.6).epsilon(1e-15));
  CHECK(r.d_sF == doctest::Approx(std::pow(22.0 * (hbar + a), 0.25) +
                                  std::pow((2 * hbar + a) * 5.0 + 1.6, 1.0 / 3.0))
                      .epsilon(1e-15));
}

TEST_CASE("convex: direct sum and domination by subdiffeo") {
  BoundInputs in;
  in.eps = 1.0;
  in.D_U1 = in.D_U2 = kPi;
  in.H1 = 0.1;
  in.H2 = 0.05;
  auto c = convex_bounds(in);
  CHECK(c.d_GH == doctest::Approx((1 + kStrict) * kPi / 3 + 0.1).epsilon(1e-15));
  auto s = subdiffeo_bounds(in);
  CHECK(c.d_GH <= s.d_GH + 1e-15);

  BoundInputs zero;
  auto z = convex_bounds(zero);
  CHECK(z.d_GH == 0.0);
  CHECK(z.d_F == 0.0);
}

TEST_CASE("every bound is nondecreasing in each input separately") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    BoundInputs in;
    in.m = 3;
    in.eps = u(rng);
    in.D_U1 = u(rng) + 0.1;
    in.D_U2 = u(rng) + 0.1;
    in.lambda = u(rng);
    in.V1 = u(rng);
    in.V2 = u(rng);
    in.A1 = u(rng);
    in.A2 = u(rng);
    in.X1 = u(rng);
    in.X2 = u(rng);
    in.H1 = u(rng);
    in.H2 = u(rng);
    auto base = subdiffeo_bounds(in);
    const double bump = 0.05 + 0.2 * u(rng);
    auto gets_bigger = [&](BoundInputs jn) {
      auto r = subdiffeo_bounds(jn);
      CHECK(r.d_GH >= base.d_GH - 1e-12);
      CHECK(r.d_F >= base.d_F - 1e-12);
      CHECK(r.d_sF >= base.d_sF - 1e-12);
    };
    BoundInputs t;
    t = in; t.eps += bump; gets_bigger(t);
    t = in; t.lambda += bump; gets_bigger(t);
    t = in; t.V1 += bump; gets_bigger(t);
    t = in; t.V2 += bump; gets_bigger(t);
    t = in; t.A1 += bump; gets_bigger(t);
    t = in; t.A2 += bump; gets_bigger(t);
    t = in; t.X1 += bump; gets_bigger(t);
    t = in; t.X2 += bump; gets_bigger(t);
    t = in; t.H1 += bump; gets_bigger(t);
    t = in; t.H2 += bump; gets_bigger(t);
  }
}

TEST_CASE("consistency: hbar >= h; d_GH >= a; squeeze(0) == subdiffeo(0,0)") {
  BoundInputs in = sample_inputs();
  auto r = subdiffeo_bounds(in);
  CHECK(r.hbar >= r.h);
  CHECK(r.d_GH >= r.a);

  BoundInputs zero;
  zero.V1 = zero.V2 = 4.0;
  zero.A1 = zero.A2 = 1.0;
  zero.D_U1 = zero.D_U2 = 2.0;
  CHECK(subdiffeo_bounds(zero).d_F == squeeze_bounds(zero).d_F);
  CHECK(subdiffeo_bounds(zero).d_F == 0.0);
}

TEST_CASE("scale covariance: scaling all length inputs by c scales d_GH and d_sF by c") {
  BoundInputs in = sample_inputs();
  for (double c : {2.0, 10.0}) {
    BoundInputs sc;
    sc.m = in.m;
    sc.eps = in.eps;  // dimensionless
    sc.D_U1 = c * in.D_U1;
    sc.D_U2 = c * in.D_U2;
    sc.lambda = c * in.lambda;
    sc.V1 = std::pow(c, 3) * in.V1;
    sc.V2 = std::pow(c, 3) * in.V2;
    sc.A1 = c * c * in.A1;
    sc.A2 = c * c * in.A2;
    sc.X1 = std::pow(c, 3) * in.X1;
    sc.X2 = std::pow(c, 3) * in.X2;
    sc.H1 = c * in.H1;
    sc.H2 = c * in.H2;
    auto base = subdiffeo_bounds(in);
    auto scaled = subdiffeo_bounds(sc);
    CHECK(scaled.d_GH / base.d_GH == doctest::Approx(c).epsilon(1e-9));
    CHECK(scaled.d_sF / base.d_sF == doctest::Approx(c).epsilon(1e-9));
    // d_F mixes c^{m+1} volume terms and c^m excess terms; assert per term
    const double volpart = (2 * scaled.hbar + scaled.a) * (sc.V1 + sc.V2 + sc.A1 + sc.A2);
    const double volpart0 = (2 * base.hbar + base.a) * (in.V1 + in.V2 + in.A1 + in.A2);
    CHECK(volpart / volpart0 >= std::pow(c, 3));  // c * c^2 area terms and c * c^3 volume terms
    CHECK(scaled.d_F - volpart == doctest::Approx(std::pow(c, 3) * (base.d_F - volpart0)).epsilon(1e-9));

    auto sq = squeeze_bounds(in), sqc = squeeze_bounds(sc);
    CHECK(sqc.d_sF / sq.d_sF == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("trace CSV carries the schema header and fixed columns") {
  ConvergenceTrace t;
  TraceRow row;
  row.i = 4;
  row.j = 2;
  row.d_F_bound = 1.5;
  t.rows.push_back(row);
  std::string csv = trace_to_csv(t);
  CHECK(csv.find("# schema: ghflat.trace.v1") == 0);
  CHECK(csv.find("i,j,epsilon,lambda,a,h,hbar,V_excess,d_GH_bound,d_F_bound,d_sF_bound") !=
        std::string::npos);
  CHECK(csv.find("\n4,2,") != std::string::npos);
}

TEST_SUITE_END();
