#include <cmath>

#include "doctest.h"
#include "ghflat/numerics.hpp"

using namespace ghflat;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("quadrature: smooth integrands hit tight tolerances") {
  auto q = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(q.converged);
  auto q2 = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
  CHECK(q2.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("quadrature: signed orientation") {
  auto q = integrate([](double x) { return x; }, 1.0, 0.0);
  CHECK(q.value == doctest::Approx(-0.5));
}

TEST_CASE("quadrature: integrable endpoint singularity (pi - r)^(-1/2)") {
  auto q = integrate([](double x) { return 1.0 / std::sqrt(M_PI - x); }, 0.0, M_PI);
  CHECK(q.value == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-6));
  CHECK(q.converged);
}

TEST_CASE("quadrature: x^(-1/2) at the left endpoint") {
  auto q = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("brent finds the obvious root") {
  double r = brent_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK_THROWS(brent_root([](double x) { return x * x + 1.0; }, -1.0, 1.0));
}

TEST_CASE("golden max locates a smooth maximum") {
  auto [x, v] = golden_max([](double t) { return -(t - 0.3) * (t - 0.3); }, 0.0, 1.0);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(v == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x, y;
  for (int k = 1; k <= 10; ++k) {
    x.push_back(k);
    y.push_back(3.0 * std::pow(double(k), 1.7));
  }
  auto fit = fit_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-9));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) CHECK(h == 1);
}

TEST_SUITE_END();
