#include "ghflat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ghflat {

namespace {
constexpr double kStrict = 1e-6;

double root(double base, double exponent_inv) {
  if (base <= 0.0) return 0.0;
  return std::pow(base, 1.0 / exponent_inv);
}
}  // namespace

double hemispherical_width(double eps, double scale) {
  if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
  return (1.0 + kStrict) * std::acos(1.0 / (1.0 + eps)) / M_PI * scale;
}

BoundReport squeeze_bounds(const BoundInputs& in) {
  BoundReport out;
  out.provenance = "squeeze";
  const double a1 = hemispherical_width(in.eps, in.D_U2);
  const double a2 = hemispherical_width(in.eps, in.D_U1);
  out.a = std::max(a1, a2);
  out.d_GH = out.a;
  out.d_F = out.a * (in.V1 + in.V2 + in.A1 + in.A2);
  out.d_sF = root(out.a * (in.V1 + in.V2), in.m + 1) + root(out.a * (in.A1 + in.A2), in.m);
  return out;
}

BoundReport subdiffeo_bounds(const BoundInputs& in) {
  BoundReport out;
  out.provenance = "subdiffeo";
  const double maxD = std::max(in.D_U1, in.D_U2);
  out.a = hemispherical_width(in.eps, maxD);
  out.h = std::sqrt(in.lambda * (maxD + in.lambda / 4.0));
  const double lip = std::sqrt(in.eps * in.eps + 2.0 * in.eps);
  out.hbar = std::max({out.h, lip * in.D_U1, lip * in.D_U2});
  out.d_GH = out.a + 2.0 * out.hbar + std::max(in.H1, in.H2);
  out.d_F = (2.0 * out.hbar + out.a) * (in.V1 + in.V2 + in.A1 + in.A2) + in.X1 + in.X2;
  out.d_sF = root((in.V1 + in.V2) * (out.hbar + out.a), in.m + 1) +
             root((2.0 * out.hbar + out.a) * (in.A1 + in.A2) + in.X1 + in.X2, in.m);
  return out;
}

BoundReport convex_bounds(const BoundInputs& in) {
  BoundReport out;
  out.provenance = "convex";
  const double a1 = hemispherical_width(in.eps, in.D_U2);
  const double a2 = hemispherical_width(in.eps, in.D_U1);
  out.a = std::max(a1, a2);
  out.d_GH = out.a + std::max(in.H1, in.H2);
  out.d_F = out.a * (in.V1 + in.V2 + in.A1 + in.A2) + in.X1 + in.X2;
  out.d_sF = root(out.a * (in.V1 + in.V2), in.m + 1) +
             root(out.a * (in.A1 + in.A2) + in.X1 + in.X2, in.m);
  return out;
}

std::string trace_to_csv(const ConvergenceTrace& trace) {
  std::string out = "# schema: ghflat.trace.v1\n";
  out += "i,j,epsilon,lambda,a,h,hbar,V_excess,d_GH_bound,d_F_bound,d_sF_bound\n";
  char line[512];
  for (const auto& r : trace.rows) {
    std::snprintf(line, sizeof(line), "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  r.i, r.j, r.epsilon, r.lambda, r.a, r.h, r.hbar, r.V_excess, r.d_GH_bound,
                  r.d_F_bound, r.d_sF_bound);
    out += line;
  }
  return out;
}

}  // namespace ghflat
