#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghflat/manifold.hpp"

namespace ghflat {

enum class Fidelity { full, flat, quantity_only };

struct Claim {
  std::string name;
  std::string kind;  // density | diameter-growth | volume-bound | boundary-area | lambda-value | trace-behavior
  std::string target;
  double tolerance = 0.0;
};

struct ClaimResult {
  std::string name;
  std::string kind;
  bool pass = false;
  double measured = 0.0;
  double expected = 0.0;
  std::string detail;
};

struct ClaimOptions {
  int grid_nr = 192;
  int grid_nphi = 192;
  int i_probe = 16;  // family index used by per-member claims
  int threads = 0;
};

struct ExampleSpec {
  std::string name;
  Fidelity fidelity = Fidelity::full;
  std::string singular_set;  // descriptor consumed by codim_flag
  int i_min = 1;
  std::string summary;

  std::function<RotSymManifold(int i)> generator;
  std::function<RotSymManifold()> limit;
  std::function<FlatModelSpace(int i)> flat_generator;
  std::function<FlatModelSpace()> flat_limit;
  // Default exhaustion W_j of the limit's regular part, in the member's
  // coordinates (members of reparametrized families carry their own charts).
  std::function<RegionSpec(int j, int i)> exhaustion;
  bool exhaustion_connected = true;
};

const std::vector<std::string>& gallery_names();
const ExampleSpec& gallery_example(const std::string& name);
bool gallery_has(const std::string& name);

RotSymManifold build_example(const std::string& name, int i);
RotSymManifold build_example_limit(const std::string& name);

std::vector<Claim> expected_claims(const std::string& name);
std::vector<ClaimResult> evaluate_claims(const std::string& name, const ClaimOptions& opts = {});

// Mollification by the normalized bump kernel phi(x) = C exp(1/(x^2-1)) on
// (-1,1). Derivatives differentiate the kernel under the integral; kinks of
// the input are split at quadrature time.
class MollifiedProfile final : public Profile {
 public:
  MollifiedProfile(std::function<double(double)> base, std::vector<double> base_kinks, double width,
                   double lo, double hi);
  double value(double r) const override;
  double deriv1(double r) const override;
  double deriv2(double r) const override;
  double domain_min() const override { return lo_; }
  double domain_max() const override { return hi_; }
  static double kernel_mass();  // integral of the normalized kernel (= 1)

 private:
  double convolve(double r, int kernel_deriv) const;
  std::function<double(double)> base_;
  std::vector<double> kinks_;
  double width_, lo_, hi_;
};

ProfilePtr mollify(std::function<double(double)> base, std::vector<double> base_kinks, double width,
                   double lo, double hi);

// Bump-quotient smooth step: 0 for u <= 0, 1 for u >= 1, C^inf between.
double smoothstep_bump(double u);

// The spline-length constant L = \int_0^1 e^{1/(4u(u-1))} du.
double spline_bump_integral();

// Reconciliation of the spline length: the direct window integral of h_i
// against the u-substituted closed form \int_0^1 (1 + e^{1/(4u(u-1))}) du,
// whose constant term should shrink with the window width but does not.
struct SplineLengthReport {
  double direct = 0.0;            // \int over the window of h_i dr = 1/i + L
  double substituted_form = 0.0;  // 1 + L
  bool mismatch_flagged = false;
};
SplineLengthReport spline_length_reconciliation(int i);

// Serializes an example member as the JSON profile-file format (sampled
// piecewise for profiles outside the expression grammar).
std::string example_to_json(const std::string& name, int i);

}  // namespace ghflat
