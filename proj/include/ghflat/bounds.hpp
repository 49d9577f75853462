#pragma once

#include <string>
#include <vector>

namespace ghflat {

// Inputs to the explicit distance-bound formulas. All lengths/volumes are
// nonnegative; H_i are Hausdorff gaps d_H^{M_i}(U_i, M_i), X_i excess volumes
// Vol_m(M_i \ U_i).
struct BoundInputs {
  int m = 3;
  double eps = 0.0;
  double D_U1 = 0.0, D_U2 = 0.0;
  double lambda = 0.0;
  double V1 = 0.0, V2 = 0.0;
  double A1 = 0.0, A2 = 0.0;
  double X1 = 0.0, X2 = 0.0;
  double H1 = 0.0, H2 = 0.0;
};

struct BoundReport {
  double a = 0.0;
  double h = 0.0;
  double hbar = 0.0;
  double d_GH = 0.0;
  double d_F = 0.0;
  double d_sF = 0.0;
  std::string provenance;
};

// Strict inequalities ("a >") realized as equality times (1 + 1e-6).
double hemispherical_width(double eps, double scale);

// Identical underlying manifold, U_i = M_i:
//   d_GH <= a,  d_F <= a (V1+V2+A1+A2),
//   d_sF <= (a(V1+V2))^{1/(m+1)} + (a(A1+A2))^{1/m}.
BoundReport squeeze_bounds(const BoundInputs& in);

// Diffeomorphic subregions:
//   h = sqrt(lambda (max D_U + lambda/4)),
//   hbar = max(h, sqrt(eps^2+2eps) D_U1, sqrt(eps^2+2eps) D_U2),
//   d_GH <= a + 2 hbar + max(H1, H2),
//   d_F  <= (2 hbar + a)(V1+V2+A1+A2) + X1 + X2,
//   d_sF <= ((V1+V2)(hbar+a))^{1/(m+1)} + ((2 hbar + a)(A1+A2) + X1+X2)^{1/m}.
BoundReport subdiffeo_bounds(const BoundInputs& in);

// Totally convex subregions (caller-asserted): no hbar terms; D_U1/D_U2 are
// the induced diameters diam_{U_i}(U_i), entering crosswise.
BoundReport convex_bounds(const BoundInputs& in);

struct TraceRow {
  int i = 0, j = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  double h = 0.0;
  double hbar = 0.0;
  double V_excess = 0.0;  // V_j = Vol_{g_i}(M \ W_j)
  double d_GH_bound = 0.0;
  double d_F_bound = 0.0;  // B(i,j) = (hbar + a)(2V0 + 2A0) + 2V_j + F
  double d_sF_bound = 0.0;
  double F_term = 0.0;
  bool divergent_flag = false;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  double V0 = 0.0, A0 = 0.0;  // empirical maxima over the window
  double diagonal_limsup = 0.0;
  bool divergent = false;
};

std::string trace_to_csv(const ConvergenceTrace& trace);

}  // namespace ghflat
