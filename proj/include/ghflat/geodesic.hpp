#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ghflat/manifold.hpp"

namespace ghflat {

enum class Stencil { dijkstra16, fmm8 };

struct GridOptions {
  int nr = 512;
  int nphi = 512;
  Stencil stencil = Stencil::dijkstra16;
  bool refine = false;  // Clairaut shooting pass on top of the grid value
  int threads = 0;
};

// Lattice over the (r, phi) half-strip [r_min, r_max] x [0, pi] carrying the
// reduced 2D metric h^2 dr^2 + f^2 dphi^2. Rows with f < 1e-12 collapse to a
// single node (poles, interior pinches). Immutable once built; concurrent
// single-source solves against one grid are safe.
class MetricGrid {
 public:
  MetricGrid(const RotSymManifold& M, int nr, int nphi);

  int nr() const { return nr_; }
  int nphi() const { return nphi_; }
  double r_at(int ir) const { return r_min_ + dr_ * ir; }
  double phi_at(int ip) const { return dphi_ * ip; }
  double dr() const { return dr_; }
  double dphi() const { return dphi_; }
  bool row_merged(int ir) const { return merged_[ir]; }
  int node_count() const { return node_count_; }
  int node(int ir, int ip) const { return node_of_[ir][ip]; }
  int nearest_row(double r) const;
  int nearest_col(double phi) const;
  const RotSymManifold& manifold() const { return M_; }

  // Metric samples cached on the doubled r-lattice.
  double f_half(int half_index) const { return f_half_[half_index]; }
  double h_half(int half_index) const { return h_half_[half_index]; }

  // Length of the straight lattice segment (ir,ip) -> (ir+di, ip+dj).
  double edge_length(int ir, int ip, int di, int dj) const;

  // Upper bound on the one-cell metric step, used as the grid tolerance.
  double cell_scale() const { return cell_scale_; }

 private:
  RotSymManifold M_;
  int nr_, nphi_;
  double r_min_, dr_, dphi_;
  std::vector<double> f_half_, h_half_;  // index k -> r_min + k*dr/2
  std::vector<bool> merged_;
  std::vector<std::vector<int>> node_of_;  // [ir][ip] -> node id
  int node_count_ = 0;
  double cell_scale_ = 0.0;

  friend class GridSolver;
};

struct DistanceField {
  int source_node = -1;
  std::vector<double> dist;
  double grid_tolerance = 0.0;  // estimated discretization scale
  bool lipschitz_ok = true;     // 1-Lipschitz along lattice edges
  bool degraded = false;
};

// Single-source shortest distances. `row_lo`/`row_hi` restrict the solve to a
// sub-range of rows (induced metric on an r-interval region); -1 means full.
DistanceField solve_distance_field(const MetricGrid& grid, int source_node,
                                   Stencil stencil = Stencil::dijkstra16, int row_lo = -1,
                                   int row_hi = -1, int target_node = -1);

struct DistanceResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool degraded = false;
  bool refined = false;
};

// Distance between (r1, .) and (r2, dphi) with dphi in [0, pi] the angular
// separation on the sphere factor.
DistanceResult distance(const RotSymManifold& M, double r1, double r2, double dphi,
                        const GridOptions& opts = {});

// Same, against a prebuilt grid (shared across calls).
DistanceResult distance_on_grid(const MetricGrid& grid, double r1, double r2, double dphi,
                                Stencil stencil, bool refine);

enum class DiameterMode { restricted_in_M, induced_in_R };

struct SupResult {
  double value = 0.0;
  double grid_tolerance = 0.0;
  bool degraded = false;
};

SupResult diameter(const RotSymManifold& M, const RegionSpec& R, DiameterMode mode,
                   const GridOptions& opts = {});

// lambda_{i,j,k} = sup_{x,y in Wj} | d_{(Wk, g)}(x,y) - d_{(M, g)}(x,y) |.
SupResult lambda_gap(const RotSymManifold& M, const RegionSpec& Wj, const RegionSpec& Wk,
                     const GridOptions& opts = {});

// d_H^M(U, M): sup over M of the distance to U. For r-interval regions of a
// rotationally symmetric metric this is the radial distance to the interval.
SupResult hausdorff_gap(const RotSymManifold& M, const RegionSpec& U, const GridOptions& opts = {});

// Flat-model counterparts (closed-form distances).
struct FlatLambdaResult {
  double sup_gap = 0.0;       // honest supremum over all pairs in Wj
  double axis_gap = 0.0;      // supremum restricted to axis-aligned pairs
  double argmax_x[2] = {0, 0};
  double argmax_y[2] = {0, 0};
};

// Torus of side L against the induced (in-square) metric on
// W_k = (1/k, L-1/k)^2, pairs restricted to W_j. Independent of k >= j.
FlatLambdaResult flat_torus_lambda(double side, double j, double k);

double flat_diameter(const FlatModelSpace& space, DiameterMode mode);

}  // namespace ghflat
