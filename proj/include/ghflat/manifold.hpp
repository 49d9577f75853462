#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ghflat/numerics.hpp"
#include "ghflat/profile.hpp"

namespace ghflat {

// Area of the unit sphere S^{m-1} and volume of the unit Euclidean m-ball.
double unit_sphere_area(int m_minus_1);
double unit_ball_volume(int m);

// Union of r-intervals inside the coordinate domain.
struct RegionSpec {
  struct Interval {
    double a, b;
  };
  std::vector<Interval> intervals;

  static RegionSpec interval(double a, double b) { return RegionSpec{{{a, b}}}; }
  bool empty() const;
  bool contains(double r) const;
  double min() const;
  double max() const;
};

// g = h(r)^2 dr^2 + f(r)^2 g_{S^{m-1}} on [r_min, r_max].
struct RotSymManifold {
  int m = 3;
  double r_min = 0.0;
  double r_max = 0.0;
  ProfilePtr f;
  ProfilePtr h;
  bool pole_min = false;
  bool pole_max = false;
  // Whether the metric is claimed smooth at its poles (|f'/h| = 1 there);
  // families forming cone/cusp tips set this false at the singular pole.
  bool claim_smooth_min = true;
  bool claim_smooth_max = true;
  std::string name;

  RegionSpec full_region() const { return RegionSpec::interval(r_min, r_max); }
};

struct ManifoldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks the RotSymManifold invariants (f > 0 interior, h >= 0, pole values,
// |f'/h| -> 1 at smooth poles within 1e-3). Throws on violation.
void validate(const RotSymManifold& M, int samples = 512);

struct ValueWithError {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

// Integral quantities (adaptive quadrature, abs 1e-9 / rel 1e-7).
ValueWithError volume(const RotSymManifold& M, const RegionSpec& R);
double boundary_area(const RotSymManifold& M, double r_c);  // closed form
ValueWithError radial_length(const RotSymManifold& M, double r1, double r2);

// Geodesic distance from a coordinate value to the chosen pole endpoint.
double radial_distance_to_pole(const RotSymManifold& M, double r, bool pole_at_max);
// Inverse: coordinate at geodesic distance `s` from the pole.
double radius_at_pole_distance(const RotSymManifold& M, double s, bool pole_at_max);

enum class DensityClass { settled, unsettled, inconclusive };

struct TipDensityResult {
  std::vector<double> radii;
  std::vector<double> values;  // mu(B(r)) / r^m
  double fitted_exponent = 0.0;
  DensityClass classification = DensityClass::inconclusive;
  std::string note;
};

// Density of the volume measure at a pole over the given decreasing radii.
// settled: min value > 0.05 * (unit Euclidean ball volume) and exponent < 0.25;
// unsettled: exponent > 0.5; otherwise inconclusive.
TipDensityResult tip_density(const RotSymManifold& M, bool pole_at_max, std::vector<double> radii);
std::vector<double> dyadic_radii(double r0, int count);

struct CurvatureSample {
  double K_rad = 0.0;   // sectional, planes containing d/dr
  double K_tan = 0.0;   // sectional, planes tangent to the sphere factor
  double Ric_rad = 0.0;
  double Ric_tan = 0.0;
  bool on_blend = false;
};

// Warped-product curvature in arclength parameter s (ds = h dr):
//   K_rad = -f_ss / f,  K_tan = (1 - f_s^2) / f^2,
//   Ric_rad = (m-1) K_rad,  Ric_tan = K_rad + (m-2) K_tan.
CurvatureSample curvature_profile(const RotSymManifold& M, double r);

struct EpsilonResult {
  double epsilon = 0.0;
  double argmax_r = 0.0;
  bool bi_lipschitz = true;  // false when some ratio is unbounded on R
  std::string note;
};

// Smallest eps with (1+eps)^-2 g1 <= g2 <= (1+eps)^2 g1 on R, computed as
// max over R of max(f1/f2, f2/f1, h1/h2, h2/h1) - 1 on `samples` points with
// golden-section refinement around the arg-max.
EpsilonResult metric_ratio_epsilon(const RotSymManifold& M1, const RotSymManifold& M2,
                                   const RegionSpec& R, int samples = 4096);

// Flat model spaces with closed-form distances.
struct FlatModelSpace {
  enum class Kind { flat_torus, flat_square } kind;
  double side = 0.0;

  static FlatModelSpace torus(double side) { return {Kind::flat_torus, side}; }
  static FlatModelSpace square(double side) { return {Kind::flat_square, side}; }

  double distance(double x1, double y1, double x2, double y2) const;
  double diameter() const;
};

}  // namespace ghflat
