#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ghflat/expr.hpp"

namespace ghflat {

// A scalar profile of the radial coordinate, twice differentiable except at
// flagged points. Immutable after construction, safe to share across threads.
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double value(double r) const = 0;
  virtual double deriv1(double r) const = 0;
  virtual double deriv2(double r) const = 0;
  virtual double domain_min() const = 0;
  virtual double domain_max() const = 0;
  // True when derivatives at r come from a blend polynomial rather than a
  // declared closed form (propagated into curvature output flags).
  virtual bool on_blend(double /*r*/) const { return false; }
  // Interior coordinates where the definition changes (piece edges, blend
  // windows, patch seams). Integrators split at these so narrow features
  // cannot slip between quadrature nodes.
  virtual std::vector<double> knots() const { return {}; }
};

using ProfilePtr = std::shared_ptr<const Profile>;

class ExprProfile final : public Profile {
 public:
  ExprProfile(ProfileExpr expr, double lo, double hi);
  double value(double r) const override;
  double deriv1(double r) const override;
  double deriv2(double r) const override;
  double domain_min() const override { return lo_; }
  double domain_max() const override { return hi_; }
  const ProfileExpr& expr() const { return expr_; }

 private:
  ProfileExpr expr_, d1_, d2_;
  double lo_, hi_;
};

// Profile backed by plain callables; used for constructions that do not fit
// the expression grammar (mollifications, arclength reparametrizations).
class FunctionProfile final : public Profile {
 public:
  using Fn = std::function<double(double)>;
  FunctionProfile(Fn v, Fn d1, Fn d2, double lo, double hi, std::vector<double> knots = {})
      : v_(std::move(v)), d1_(std::move(d1)), d2_(std::move(d2)), lo_(lo), hi_(hi),
        knots_(std::move(knots)) {}
  double value(double r) const override { return v_(r); }
  double deriv1(double r) const override { return d1_(r); }
  double deriv2(double r) const override { return d2_(r); }
  double domain_min() const override { return lo_; }
  double domain_max() const override { return hi_; }
  std::vector<double> knots() const override { return knots_; }

 private:
  Fn v_, d1_, d2_;
  double lo_, hi_;
  std::vector<double> knots_;
};

ProfilePtr constant_profile(double c, double lo, double hi);

enum class BlendKind { exact_match, monotone_cubic, quintic };

struct BlendSpec {
  double at = 0.0;         // junction coordinate
  BlendKind kind = BlendKind::exact_match;
  double halfwidth = 0.0;  // blend window [at - halfwidth, at + halfwidth]
};

struct Piece {
  double from = 0.0;
  double to = 0.0;
  ProfilePtr profile;          // underlying closed form
  std::string expr_text;       // source text when expression-backed ("" otherwise)
};

struct PiecewiseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Piecewise profile with optional smooth blends at junctions. Pieces are
// sorted; consecutive pieces either abut (exact match or straddling blend
// window) or leave a gap covered exactly by a blend window. Evaluation at a
// shared breakpoint uses the right piece (half-open convention).
class PiecewiseProfile final : public Profile {
 public:
  static constexpr double kC0Tol = 1e-8;
  static constexpr double kC1Tol = 1e-6;

  PiecewiseProfile(std::vector<Piece> pieces, std::vector<BlendSpec> blends);

  double value(double r) const override;
  double deriv1(double r) const override;
  double deriv2(double r) const override;
  double domain_min() const override { return lo_; }
  double domain_max() const override { return hi_; }
  bool on_blend(double r) const override;

  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<BlendSpec>& blends() const { return blends_; }

  // Envelope of the two pieces adjacent to the blend containing r
  // (min, max of both closed forms extended over the window).
  std::optional<std::pair<double, double>> blend_envelope(double r) const;

  std::vector<double> knots() const override;

 private:
  struct BlendPoly {
    double a = 0.0, b = 0.0;  // window
    double coeff[6] = {0, 0, 0, 0, 0, 0};
    int left_piece = -1, right_piece = -1;
    BlendKind kind = BlendKind::quintic;
    double eval(double r, int deriv) const;
  };

  int piece_index(double r) const;
  const BlendPoly* blend_at(double r) const;

  std::vector<Piece> pieces_;
  std::vector<BlendSpec> blends_;
  std::vector<BlendPoly> polys_;
  double lo_ = 0.0, hi_ = 0.0;
};

using PiecewisePtr = std::shared_ptr<const PiecewiseProfile>;

// Convenience builder from expression texts:
// pieces {(from, to, "expr"), ...}, blends as given.
PiecewisePtr build_piecewise(const std::vector<std::tuple<double, double, std::string>>& pieces,
                             const std::vector<BlendSpec>& blends = {});

// JSON round trip for the documented schema:
// {"pieces":[{"from":a,"to":b,"expr":"..."}],
//  "blends":[{"at":b,"kind":"quintic","halfwidth":w}]}
std::string piecewise_to_json(const PiecewiseProfile& p);
PiecewisePtr piecewise_from_json(const std::string& json_text);

}  // namespace ghflat
