#include <array>
#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "ghflat/gallery.hpp"
#include "ghflat/geodesic.hpp"

using namespace ghflat;

TEST_SUITE_BEGIN("geodesic");

namespace {

const double kPi = M_PI;

RotSymManifold sphere() { return build_example("ex-region", 1); }

// Great-circle distance on the round S^3 between colatitudes r1, r2 with
// angular separation dphi on the S^2 factor.
double sphere_oracle(double r1, double r2, double dphi) {
  const double c = std::cos(r1) * std::cos(r2) + std::sin(r1) * std::sin(r2) * std::cos(dphi);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

TEST_CASE("sphere distance: spec example 2pi/3 with refinement") {
  RotSymManifold M = sphere();
  GridOptions opts;
  opts.nr = opts.nphi = 257;
  opts.refine = true;
  auto d = distance(M, kPi / 4, 3 * kPi / 4, kPi / 2, opts);
  CHECK(d.value == doctest::Approx(2 * kPi / 3).epsilon(1e-3));
  CHECK(d.refined);
}

TEST_CASE("trivial distances") {
  RotSymManifold M = sphere();
  GridOptions opts;
  opts.nr = opts.nphi = 129;
  CHECK(distance(M, 1.0, 1.0, 0.0, opts).value == doctest::Approx(0.0));
  // p = q after snapping
  CHECK(distance(M, 0.5, 0.5, 0.0, opts).value == 0.0);
}

TEST_CASE("sphere oracle: 30 random pairs within 1% using grid + refinement") {
  RotSymManifold M = sphere();
  MetricGrid grid(M, 257, 257);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ur(0.05, kPi - 0.05), uphi(0.0, kPi);
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    const double r1 = grid.r_at(grid.nearest_row(ur(rng)));
    const double r2 = grid.r_at(grid.nearest_row(ur(rng)));
    const double dphi = grid.phi_at(grid.nearest_col(uphi(rng)));
    const double want = sphere_oracle(r1, r2, dphi);
    if (want < 0.05) continue;
    auto got = distance_on_grid(grid, r1, r2, dphi, Stencil::dijkstra16, true);
    worst = std::max(worst, std::abs(got.value - want) / want);
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("metric axioms on the graph metric") {
  RotSymManifold M = build_example_limit("ex-cone");
  MetricGrid grid(M, 97, 97);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> row(0, 96), col(0, 96);

  // Symmetry: swapping source and target changes nothing beyond fp noise.
  for (int k = 0; k < 5; ++k) {
    const double r1 = grid.r_at(row(rng)), r2 = grid.r_at(row(rng));
    const double ph = grid.phi_at(col(rng));
    const double a = distance_on_grid(grid, r1, r2, ph, Stencil::dijkstra16, false).value;
    const double b = distance_on_grid(grid, r2, r1, ph, Stencil::dijkstra16, false).value;
    CHECK(std::abs(a - b) <= 1e-9);
  }

  // Triangle inequality on full distance fields (graph metric is exact).
  const int src_a = grid.node(row(rng), 0);
  auto fa = solve_distance_field(grid, src_a);
  const int src_b = grid.node(row(rng), col(rng) / 2);
  auto fb = solve_distance_field(grid, src_b);
  const double dab = fa.dist[src_b];
  std::uniform_int_distribution<int> node(0, grid.node_count() - 1);
  for (int k = 0; k < 1000; ++k) {
    const int c = node(rng);
    if (!std::isfinite(fa.dist[c]) || !std::isfinite(fb.dist[c])) continue;
    CHECK(fa.dist[c] <= dab + fb.dist[c] + 2.0 * grid.cell_scale());
    CHECK(dab <= fa.dist[c] + fb.dist[c] + 2.0 * grid.cell_scale());
  }
}

TEST_CASE("distance dominates net radial travel and the field is 1-Lipschitz") {
  RotSymManifold M = build_example("ex-not-GH", 8);
  GridOptions opts;
  opts.nr = opts.nphi = 193;
  auto d = distance(M, 0.3, kPi - 0.05, 2.0, opts);
  CHECK(d.value >= radial_length(M, 0.3, kPi - 0.05).value - 1e-9);
  MetricGrid grid(M, 193, 193);
  auto field = solve_distance_field(grid, grid.node(5, 0));
  CHECK(field.lipschitz_ok);
}

TEST_CASE("diameters: sphere, hemisphere, flat square") {
  RotSymManifold M = sphere();
  GridOptions opts;
  opts.nr = opts.nphi = 193;
  opts.threads = 4;
  auto full = diameter(M, M.full_region(), DiameterMode::restricted_in_M, opts);
  CHECK(full.value == doctest::Approx(kPi).epsilon(0.02));
  auto hemi = diameter(M, RegionSpec::interval(0.0, kPi / 2), DiameterMode::restricted_in_M, opts);
  CHECK(hemi.value == doctest::Approx(kPi).epsilon(0.02));  // antipodal equator pair
  CHECK(flat_diameter(FlatModelSpace::square(2 * kPi), DiameterMode::induced_in_R) ==
        doctest::Approx(2 * std::sqrt(2.0) * kPi));
}

TEST_CASE("induced >= restricted diameter") {
  RotSymManifold M = build_example_limit("ex-region");  // sphere minus cap domain
  GridOptions opts;
  opts.nr = opts.nphi = 129;
  RegionSpec R = RegionSpec::interval(0.0, M.r_max - 0.2);
  auto restr = diameter(M, R, DiameterMode::restricted_in_M, opts);
  auto induc = diameter(M, R, DiameterMode::induced_in_R, opts);
  CHECK(induc.value >= restr.value - 1e-9);
}

TEST_CASE("lambda gap: same region gives zero, cone family vanishes in k") {
  RotSymManifold M = sphere();
  GridOptions opts;
  opts.nr = opts.nphi = 129;
  auto zero = lambda_gap(M, M.full_region(), M.full_region(), opts);
  CHECK(zero.value <= 1e-12);

  RotSymManifold Mi = build_example("ex-cone", 8);
  RegionSpec W4 = RegionSpec::interval(0.0, kPi - 1.0 / 4);
  auto lam8 = lambda_gap(Mi, W4, RegionSpec::interval(0.0, kPi - 1.0 / 8), opts);
  auto lam32 = lambda_gap(Mi, W4, RegionSpec::interval(0.0, kPi - 1.0 / 32), opts);
  CHECK(lam32.value <= lam8.value + 1e-9);  // nonincreasing in k
  CHECK(lam32.value <= 0.1);
}

TEST_CASE("lambda gap is monotone: induced distances relax as the region grows") {
  RotSymManifold M = build_example_limit("ex-region");
  GridOptions opts;
  opts.nr = opts.nphi = 129;
  RegionSpec Wj = RegionSpec::interval(0.0, M.r_max - 0.3);
  double prev = 1e300;
  for (double margin : {0.25, 0.15, 0.05}) {
    auto lam = lambda_gap(M, Wj, RegionSpec::interval(0.0, M.r_max - margin), opts);
    CHECK(lam.value <= prev + 1e-9);
    prev = lam.value;
  }
}

TEST_CASE("induced distances relax pointwise as the region grows") {
  RotSymManifold M = build_example_limit("ex-region");
  MetricGrid grid(M, 129, 129);
  const int src = grid.node(20, 0);
  const int lo = 0;
  auto rows_for = [&](double margin) { return grid.nearest_row(M.r_max - margin); };
  auto f_small = solve_distance_field(grid, src, Stencil::dijkstra16, lo, rows_for(0.3));
  auto f_big = solve_distance_field(grid, src, Stencil::dijkstra16, lo, rows_for(0.1));
  auto f_full = solve_distance_field(grid, src, Stencil::dijkstra16);
  for (int ir = 0; ir <= rows_for(0.3); ir += 7)
    for (int ip = 0; ip < grid.nphi(); ip += 11) {
      const int n = grid.node(ir, ip);
      if (!std::isfinite(f_small.dist[n])) continue;
      CHECK(f_small.dist[n] >= f_big.dist[n] - 1e-12);
      CHECK(f_big.dist[n] >= f_full.dist[n] - 1e-12);
    }
}

TEST_CASE("restricted diameter of a union region skips the gap rows") {
  // two thin bands around the equator of the round sphere: the diameter is
  // between band points, not between points inside the excluded middle
  RotSymManifold M = build_example_limit("ex-region");
  RegionSpec bands;
  bands.intervals = {{0.4, 0.6}, {2.0, 2.2}};
  GridOptions opts;
  opts.nr = opts.nphi = 129;
  auto d = diameter(M, bands, DiameterMode::restricted_in_M, opts);
  // closed-form sup: max over band endpoints r1, r2 and dphi = pi of the
  // great-circle distance = r1 + r2 capped at... for r1=0.6, r2=2.2:
  // arccos(cos .6 cos 2.2 + sin .6 sin 2.2 cos pi) = 2.8 exactly (over pole)
  CHECK(d.value <= 2.8 + 3 * d.grid_tolerance);
  CHECK(d.value >= 2.8 - 3 * d.grid_tolerance - 0.05);
}

TEST_CASE("induced-mode operations reject disconnected regions") {
  RotSymManifold M = build_example_limit("ex-region");
  RegionSpec broken;
  broken.intervals = {{0.0, 0.5}, {1.0, 1.5}};
  GridOptions opts;
  opts.nr = opts.nphi = 65;
  CHECK_THROWS(diameter(M, broken, DiameterMode::induced_in_R, opts));
  CHECK_THROWS(lambda_gap(M, RegionSpec::interval(0.0, 0.4), broken, opts));
}

TEST_CASE("hausdorff gap: radial caps and the spline tip") {
  RotSymManifold M = sphere();
  for (int j : {4, 8}) {
    auto g = hausdorff_gap(M, RegionSpec::interval(0.0, kPi - 1.0 / j));
    CHECK(g.value == doctest::Approx(1.0 / j).epsilon(1e-6));
  }
  CHECK(hausdorff_gap(M, M.full_region()).value == doctest::Approx(0.0));

  const int i = 10;
  RotSymManifold G = build_example("ex-not-GH", i);
  const double L_spline = radial_length(G, kPi - 2.0 / i, kPi - 1.0 / i).value;
  auto g = hausdorff_gap(G, RegionSpec::interval(0.0, kPi - 2.0 / i));
  CHECK(g.value == doctest::Approx(L_spline + 1.0 / i).epsilon(1e-4));
}

TEST_CASE("flat torus wraparound distance and lambda values") {
  FlatModelSpace torus = FlatModelSpace::torus(2 * kPi);
  CHECK(torus.distance(0.1, 0.1, 2 * kPi - 0.1, 0.1) == doctest::Approx(0.2));
  for (int j : {4, 8}) {
    auto lam = flat_torus_lambda(2 * kPi, j, 4 * j);
    CHECK(lam.axis_gap == doctest::Approx(2 * kPi - 4.0 / j).epsilon(1e-12));
    CHECK(lam.sup_gap == doctest::Approx(std::sqrt(2.0) * (2 * kPi - 4.0 / j)).epsilon(1e-12));
  }
}

TEST_CASE("convergence order: halving the spacing reduces the fmm error by >= 1.5x") {
  RotSymManifold M = sphere();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ur(0.4, kPi - 0.4), uphi(0.3, kPi);
  std::vector<std::array<double, 3>> pairs;
  for (int k = 0; k < 12; ++k) pairs.push_back({ur(rng), ur(rng), uphi(rng)});

  auto max_err = [&](int n) {
    MetricGrid grid(M, n, n);
    double worst = 0.0;
    for (auto& [r1, r2, dphi] : pairs) {
      const double a = grid.r_at(grid.nearest_row(r1));
      const double b = grid.r_at(grid.nearest_row(r2));
      const double p = grid.phi_at(grid.nearest_col(dphi));
      const double want = sphere_oracle(a, b, p);
      if (want < 0.3) continue;
      auto got = distance_on_grid(grid, a, b, p, Stencil::fmm8, false);
      worst = std::max(worst, std::abs(got.value - want));
    }
    return worst;
  };
  const double e64 = max_err(65);
  const double e128 = max_err(129);
  const double e256 = max_err(257);
  CAPTURE(e64);
  CAPTURE(e128);
  CAPTURE(e256);
  CHECK(e64 / e128 >= 1.5);
  CHECK(e128 / e256 >= 1.5);
}

TEST_CASE("concurrent single-source solves against a shared grid agree with serial") {
  RotSymManifold M = sphere();
  MetricGrid grid(M, 129, 129);
  std::vector<int> sources = {grid.node(10, 0), grid.node(40, 0), grid.node(70, 0),
                              grid.node(100, 0)};
  std::vector<double> serial, parallel(sources.size());
  for (int s : sources) serial.push_back(solve_distance_field(grid, s).dist[grid.node(64, 64)]);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < sources.size(); ++k)
    pool.emplace_back([&, k] {
      parallel[k] = solve_distance_field(grid, sources[k]).dist[grid.node(64, 64)];
    });
  for (auto& t : pool) t.join();
  for (std::size_t k = 0; k < sources.size(); ++k) CHECK(parallel[k] == serial[k]);
}

TEST_CASE("interior pinch: distances pass through the collapsed equator") {
  RotSymManifold N = build_example_limit("ex-not-connected");
  GridOptions opts;
  opts.nr = opts.nphi = 257;
  // antipodal-style pair across the pinch: radial through r = pi/2
  auto d = distance(N, kPi / 4, 3 * kPi / 4, kPi, opts);
  CHECK(d.value == doctest::Approx(kPi / 2).epsilon(0.03));
}

TEST_SUITE_END();
