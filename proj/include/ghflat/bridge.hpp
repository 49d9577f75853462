#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ghflat/geodesic.hpp"
#include "ghflat/manifold.hpp"

namespace ghflat {

struct Separation {
  double a1 = 0.0, a2 = 0.0, a = 0.0;
};

// Hemispherical widths: a_1 > arccos((1+eps)^-1)/pi * diam2 and symmetrically,
// realized with the strictness factor (1 + 1e-6).
Separation min_separation(double eps, double diam1, double diam2);

struct BridgeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The filling-bridge metric g' = dt^2 + G(t) on base x [t1, t2] with the
// canonical minimal admissible capped choice, componentwise on diagonal
// metrics:
//   G(t) = min( max(psi_1(t)^2 g_1, psi_2(t)^2 g_2), g_1 + g_2 ),
//   psi_i(t) = max(cos((t - t_i) pi / D_i), 0).
// Single-ended bridges (hemispherical suspension of one metric) set
// `single_ended` and ignore g_2.
class FillingBridge {
 public:
  enum class BaseKind { rotsym, circle };

  // Two-ended bridge over a shared rotationally symmetric base domain.
  FillingBridge(RotSymManifold g1, RotSymManifold g2, double D1, double D2, double t1, double t2);

  // Single-ended suspension of a rotationally symmetric metric (Lemma-style),
  // with an admissibility scale for negative controls (1 = admissible).
  static FillingBridge suspension(RotSymManifold g, double D, double t_lo, double t_hi,
                                  double admissibility_scale = 1.0);

  // Single-ended suspension of a circle of the given radius.
  static FillingBridge circle_suspension(double radius, double D, double t_lo, double t_hi,
                                         double admissibility_scale = 1.0);

  BaseKind base_kind() const { return kind_; }
  bool single_ended() const { return single_; }
  double t1() const { return t1_; }
  double t2() const { return t2_; }
  double D(int side) const { return side == 1 ? D1_ : D2_; }
  int base_dim() const;  // m of the base
  const RotSymManifold& base(int side) const { return side == 1 ? g1_ : g2_; }
  double circle_radius() const { return circle_radius_; }

  double psi(int side, double t) const;
  // Diagonal metric components of G(t) at (r, t).
  double f_bridge(double r, double t) const;
  double h_bridge(double r, double t) const;

  // Componentwise admissibility / end-condition / cap verification on an
  // (r, t) sample lattice. Returns human-readable violations (empty = pass).
  std::vector<std::string> check_invariants(int nr = 64, int nt = 64, double tol = 1e-9) const;

 private:
  FillingBridge() = default;
  BaseKind kind_ = BaseKind::rotsym;
  bool single_ = false;
  RotSymManifold g1_, g2_;
  double circle_radius_ = 0.0;
  double D1_ = 0.0, D2_ = 0.0;
  double t1_ = 0.0, t2_ = 0.0;
  double admissibility_scale_ = 1.0;
};

struct BridgeGridOptions {
  int nr = 128;
  int nphi = 128;
  int nt = 64;
  int threads = 0;
};

// Distance inside the bridge between base points p=(r1, phi=0, t_a) and
// q=(r2, dphi, t_b); for circle bases r is ignored.
double bridge_distance(const FillingBridge& B, double r1, double t_a, double r2, double dphi,
                       double t_b, const BridgeGridOptions& opts = {});

struct EmbeddingSample {
  double r1 = 0.0, r2 = 0.0, dphi = 0.0;
};

struct EmbeddingReport {
  double max_violation = 0.0;  // max over samples of L(gamma) - d_M'(phi p, phi q)
  double grid_tolerance = 0.0;
  std::vector<double> violations;
};

// D-geodesic-embedding check of side i: base geodesics of length <= D_i must
// keep their length inside the bridge.
EmbeddingReport verify_geodesic_embedding(const FillingBridge& B, int side,
                                          const std::vector<EmbeddingSample>& samples,
                                          const BridgeGridOptions& opts = {});

struct CrossDistanceResult {
  double measured = 0.0;
  double lower_bound_base = 0.0;      // d_{M_1}(q1, q2)
  double lower_bound_spherical = 0.0; // rescaled spherical law of cosines
};

CrossDistanceResult cross_distance_check(const FillingBridge& B, double r_q1, double r_q2,
                                         double dphi, const BridgeGridOptions& opts = {});

struct BridgeVolumes {
  double filling = 0.0;      // Vol_{m+1}(M')
  double lateral = 0.0;      // Vol_m(lateral boundary), 0 for closed bases
  double filling_cap = 0.0;  // |t2-t1| (Vol(M1)+Vol(M2))
  double lateral_cap = 0.0;  // |t2-t1| (A1+A2)
};

BridgeVolumes bridge_volumes(const FillingBridge& B);

// JSON export of sampled f'(r,t), h'(r,t) lattices for external plotting.
std::string bridge_to_json(const FillingBridge& B, int nr = 33, int nt = 33);

}  // namespace ghflat
