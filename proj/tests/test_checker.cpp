#include <cmath>

#include "doctest.h"
#include "ghflat/checker.hpp"
#include "ghflat/trace.hpp"

using namespace ghflat;

TEST_SUITE_BEGIN("checker");

TEST_CASE("codim classification from descriptors") {
  CHECK(codim_flag(gallery_example("ex-cone").singular_set) == CodimClass::point);
  CHECK(codim_flag(gallery_example("ex-not-connected").singular_set) == CodimClass::codim_1);
  CHECK(codim_flag(gallery_example("ex-to-torus-square").singular_set) == CodimClass::codim_1);
  CHECK(codim_flag(gallery_example("ex-region").singular_set) == CodimClass::none);
  CHECK(codim_flag("closed submanifold of codimension 2") == CodimClass::codim_ge_2);
}

TEST_CASE("check_ricci: round spheres give exactly 2, cap-cyl stays nonnegative") {
  auto sphere_rows = check_ricci("ex-region", {1, 2}, 0.0, 64);
  for (const auto& row : sphere_rows) {
    CHECK(row.min_ricci == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(row.pass);
  }
  auto capcyl = check_ricci("ex-cap-cyl", {4, 8}, 0.0, 128);
  for (const auto& row : capcyl) CHECK(row.min_ricci >= -1e-3);
}

TEST_CASE("check_ricci: the spline family has strongly negative curvature") {
  auto rows = check_ricci("ex-not-GH", {10}, 0.0, 512);
  CHECK(rows.at(0).min_ricci < -10.0);
  CHECK(!rows.at(0).pass);
}

TEST_CASE("check_family on ex-cone: all hypotheses pass, codim-thm route open") {
  CheckWindow w;
  w.i_list = {4, 8, 16};
  w.j_list = {2, 4, 8};
  w.k_list = {8, 16, 32};
  w.grid_nr = w.grid_nphi = 129;
  auto rep = check_family("ex-cone", w);
  CHECK(rep.verdicts.at("m-diam") == Verdict::pass);
  CHECK(rep.verdicts.at("m-area") == Verdict::pass);
  CHECK(rep.verdicts.at("m-edge-volume") == Verdict::pass);
  CHECK(rep.verdicts.at("well-embedded") == Verdict::pass);
  bool has_codim = false;
  for (const auto& r : rep.routes)
    if (r == "codim-thm") has_codim = true;
  CHECK(has_codim);
}

TEST_CASE("check_family on the torus: well-embeddedness fails, no route") {
  CheckWindow w;
  w.i_list = {4, 16};
  w.j_list = {4, 8};
  w.k_list = {16, 32};
  auto rep = check_family("ex-to-torus-square", w);
  CHECK(rep.verdicts.at("well-embedded") == Verdict::fail);
  CHECK(rep.codim == CodimClass::codim_1);
  CHECK(rep.routes.empty());
  // the lambda table carries the honest sup, ~ sqrt(2)(2pi - 4/j)
  CHECK(rep.lambda[0][0][0] ==
        doctest::Approx(std::sqrt(2.0) * (2 * M_PI - 1.0)).epsilon(1e-6));
}

TEST_CASE("check_family on ex-to-hemisphere: only the edge volume fails") {
  CheckWindow w;
  w.i_list = {4, 8, 16, 32};
  w.j_list = {2, 4, 8};
  w.k_list = {16, 32};
  w.grid_nr = w.grid_nphi = 129;
  auto rep = check_family("ex-to-hemisphere", w);
  CHECK(rep.verdicts.at("m-edge-volume") == Verdict::fail);
  CHECK(rep.verdicts.at("m-diam") == Verdict::pass);
  CHECK(rep.verdicts.at("m-area") == Verdict::pass);
  CHECK(rep.routes.empty());
}

TEST_CASE("routing soundness: ablating any passing input closes the route") {
  // Pure-logic re-derivation of the routing rule.
  auto route_open = [](bool conn, bool smooth, bool diam, bool area, bool vol, bool ricci,
                       bool codim2) {
    return conn && smooth && diam && area && vol && ricci && codim2;
  };
  CHECK(route_open(true, true, true, true, true, true, true));
  for (int bit = 0; bit < 7; ++bit) {
    bool flags[7] = {true, true, true, true, true, true, true};
    flags[bit] = false;
    CHECK(!route_open(flags[0], flags[1], flags[2], flags[3], flags[4], flags[5], flags[6]));
  }
}

TEST_CASE("reports are deterministic: identical config gives byte-identical JSON") {
  CheckWindow w;
  w.i_list = {4, 8};
  w.j_list = {2, 4};
  w.k_list = {8, 16};
  w.grid_nr = w.grid_nphi = 97;
  w.threads = 4;
  auto a = report_to_json(check_family("ex-cone", w));
  auto b = report_to_json(check_family("ex-cone", w));
  CHECK(a == b);
  CHECK(a.find("\"routes\"") != std::string::npos);
  CHECK(a.find("\"unverified\": \"contractibility\"") != std::string::npos);
}

TEST_CASE("trace: ex-region has a = 0 and a positive floor from the lost cap") {
  TraceOptions opts;
  opts.i_list = {2, 4};
  opts.j_list = {2, 4};
  opts.grid_nr = opts.grid_nphi = 97;
  auto trace = flat_convergence_trace("ex-region", opts);
  REQUIRE(!trace.rows.empty());
  const double capvol = 4 * M_PI * (M_PI / 16.0 - std::sin(2 * M_PI / 16.0) / 4.0 +
                                    std::sin(M_PI / 16.0) * 0.0);
  (void)capvol;
  for (const auto& row : trace.rows) {
    CHECK(row.epsilon <= 1e-9);
    CHECK(row.a <= 1e-9);
    CHECK(row.V_excess > 0.03);  // at least the cap volume
    CHECK(row.d_F_bound >= 2 * row.V_excess - 1e-9);
  }
}

TEST_SUITE_END();
