#include "ghflat/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "ghflat/clairaut.hpp"

namespace ghflat {

namespace {

constexpr double kPoleF = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-neighbor stencil: axis, diagonal and knight moves.
const int kOffsets16[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},   {1, -1},
                               {-1, 1}, {-1, -1}, {2, 1},  {2, -1}, {-2, 1},  {-2, -1},
                               {1, 2},  {1, -2}, {-1, 2}, {-1, -2}};

}  // namespace

MetricGrid::MetricGrid(const RotSymManifold& M, int nr, int nphi) : M_(M), nr_(nr), nphi_(nphi) {
  if (nr < 2 || nphi < 2) throw ManifoldError("grid needs at least 2x2 nodes");
  r_min_ = M.r_min;
  dr_ = (M.r_max - M.r_min) / (nr - 1);
  dphi_ = M_PI / (nphi - 1);

  f_half_.resize(2 * nr - 1);
  h_half_.resize(2 * nr - 1);
  for (int k = 0; k < 2 * nr - 1; ++k) {
    const double r = r_min_ + 0.5 * dr_ * k;
    f_half_[k] = M.f->value(r);
    h_half_[k] = M.h->value(r);
  }

  merged_.resize(nr);
  for (int ir = 0; ir < nr; ++ir) merged_[ir] = f_half_[2 * ir] < kPoleF;

  node_of_.assign(nr, std::vector<int>(nphi, -1));
  int next = 0;
  for (int ir = 0; ir < nr; ++ir) {
    if (merged_[ir]) {
      for (int ip = 0; ip < nphi; ++ip) node_of_[ir][ip] = next;
      ++next;
    } else {
      for (int ip = 0; ip < nphi; ++ip) node_of_[ir][ip] = next++;
    }
  }
  node_count_ = next;

  double max_h = 0.0, max_f = 0.0;
  for (int k = 0; k < 2 * nr - 1; ++k) {
    max_h = std::max(max_h, h_half_[k]);
    max_f = std::max(max_f, f_half_[k]);
  }
  cell_scale_ = std::hypot(max_h * dr_, max_f * dphi_);
}

int MetricGrid::nearest_row(double r) const {
  int ir = static_cast<int>(std::lround((r - r_min_) / dr_));
  return std::clamp(ir, 0, nr_ - 1);
}

int MetricGrid::nearest_col(double phi) const {
  int ip = static_cast<int>(std::lround(phi / dphi_));
  return std::clamp(ip, 0, nphi_ - 1);
}

double MetricGrid::edge_length(int ir, int ip, int di, int dj) const {
  (void)ip;
  // Straight segment in coordinates; Simpson with the metric at the two ends
  // and the midpoint. The metric does not depend on phi.
  const double drr = di * dr_;
  const double dpp = dj * dphi_;
  auto speed = [&](int half_idx) {
    const double h = h_half_[half_idx];
    const double f = f_half_[half_idx];
    return std::sqrt(h * h * drr * drr + f * f * dpp * dpp);
  };
  const int k0 = 2 * ir;
  const int k1 = 2 * (ir + di);
  const int km = k0 + di;  // midpoint on the doubled lattice
  return (speed(k0) + 4.0 * speed(km) + speed(k1)) / 6.0;
}

namespace {

struct QueueItem {
  double d;
  int node;
  bool operator>(const QueueItem& o) const { return d > o.d; }
};

struct NodeRef {
  int ir, ip;
};

}  // namespace

DistanceField solve_distance_field(const MetricGrid& grid, int source_node, Stencil stencil,
                                   int row_lo, int row_hi, int target_node) {
  const int nr = grid.nr();
  const int nphi = grid.nphi();
  if (row_lo < 0) row_lo = 0;
  if (row_hi < 0) row_hi = nr - 1;

  // Reverse map node -> representative (ir, ip).
  std::vector<NodeRef> rep(grid.node_count(), {-1, -1});
  for (int ir = 0; ir < nr; ++ir)
    for (int ip = 0; ip < nphi; ++ip) {
      const int n = grid.node(ir, ip);
      if (rep[n].ir < 0) rep[n] = {ir, ip};
    }

  DistanceField field;
  field.source_node = source_node;
  field.dist.assign(grid.node_count(), kInf);
  field.grid_tolerance = grid.cell_scale();
  field.dist[source_node] = 0.0;

  std::vector<bool> settled(grid.node_count(), false);
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>> pq;
  pq.push({0.0, source_node});

  // Seed a disk around the source with straight-segment lengths. This removes
  // the point-source front-curvature error that otherwise dominates the
  // discretization error of the marching pass. Only the eikonal mode seeds;
  // the plain graph mode keeps its exact source/target symmetry.
  if (stencil == Stencil::fmm8) {
    const NodeRef s = rep[source_node];
    const int R = 8;
    for (int jr = std::max(row_lo, s.ir - R); jr <= std::min(row_hi, s.ir + R); ++jr)
      for (int jp = std::max(0, s.ip - R); jp <= std::min(nphi - 1, s.ip + R); ++jp) {
        if (jr == s.ir && jp == s.ip) continue;
        const int v = grid.node(jr, jp);
        const double len = grid.edge_length(s.ir, s.ip, jr - s.ir, jp - s.ip);
        if (len < field.dist[v]) {
          field.dist[v] = len;
          pq.push({len, v});
        }
      }
  }

  auto relax = [&](int node, double cand) {
    if (cand < field.dist[node]) {
      field.dist[node] = cand;
      pq.push({cand, node});
    }
  };

  // FMM-style quadratic update for diagonal metrics: the r and phi axes are
  // orthogonal, so a first-arrival plane-wave solve on the axis pair applies.
  auto quadratic_update = [&](int ir, int ip) -> double {
    const int node = grid.node(ir, ip);
    double best = field.dist[node];
    for (int sr = -1; sr <= 1; sr += 2) {
      const int ira = ir + sr;
      if (ira < row_lo || ira > row_hi) continue;
      const int na = grid.node(ira, ip);
      const double Ta = field.dist[na];
      if (!settled[na] || !std::isfinite(Ta)) continue;
      const double p = grid.edge_length(ir, ip, sr, 0);
      for (int sp = -1; sp <= 1; sp += 2) {
        const int ipb = ip + sp;
        if (ipb < 0 || ipb >= nphi) continue;
        const int nb = grid.node(ir, ipb);
        const double Tb = field.dist[nb];
        if (!settled[nb] || !std::isfinite(Tb)) continue;
        const double q = grid.edge_length(ir, ip, 0, sp);
        if (p <= 0.0 || q <= 0.0) continue;
        const double ip2 = 1.0 / (p * p), iq2 = 1.0 / (q * q);
        const double A = ip2 + iq2;
        const double B = Ta * ip2 + Tb * iq2;
        const double C = Ta * Ta * ip2 + Tb * Tb * iq2 - 1.0;
        const double disc = B * B - A * C;
        if (disc < 0.0) continue;
        const double T = (B + std::sqrt(disc)) / A;
        if (T >= std::max(Ta, Tb) && T < best) best = T;
      }
    }
    return best;
  };

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (settled[u] || d > field.dist[u]) continue;
    settled[u] = true;
    if (u == target_node) break;

    const NodeRef ref = rep[u];
    // A merged row's node stands for every phi; expand edges from all its columns.
    const bool u_merged = grid.row_merged(ref.ir);
    const int ip_lo = u_merged ? 0 : ref.ip;
    const int ip_hi = u_merged ? nphi - 1 : ref.ip;
    for (int ip = ip_lo; ip <= ip_hi; ++ip) {
      for (const auto& off : kOffsets16) {
        const int jr = ref.ir + off[0];
        const int jp = ip + off[1];
        if (jr < row_lo || jr > row_hi || jp < 0 || jp >= nphi) continue;
        const int v = grid.node(jr, jp);
        if (settled[v]) continue;
        relax(v, d + grid.edge_length(ref.ir, ip, off[0], off[1]));
        if (stencil == Stencil::fmm8) {
          const double cand = quadratic_update(jr, jp);
          if (cand < field.dist[v]) relax(v, cand);
        }
      }
    }
  }

  if (stencil == Stencil::fmm8) {
    // Fast-sweeping polish with second-order one-sided upwind differences
    // (Zhao-style FSM2): removes the first-order front-curvature error that
    // otherwise dominates on curved metrics. Coefficients are node-centered,
    // |grad T|_g(x) = 1 with g = diag(h^2, f^2).
    struct AxisTerm {
      double alpha, beta, t1;
      bool ok = false;
    };
    auto axis_term = [&](int ir, int ip, bool radial) -> AxisTerm {
      AxisTerm best;
      const double spacing =
          radial ? grid.h_half(2 * ir) * grid.dr() : grid.f_half(2 * ir) * grid.dphi();
      if (!(spacing > 0.0)) return best;
      for (int dir = -1; dir <= 1; dir += 2) {
        const int j1r = radial ? ir + dir : ir;
        const int j1p = radial ? ip : ip + dir;
        if (j1r < row_lo || j1r > row_hi || j1p < 0 || j1p >= nphi) continue;
        const double T1 = field.dist[grid.node(j1r, j1p)];
        if (!std::isfinite(T1)) continue;
        AxisTerm cand;
        cand.ok = true;
        cand.t1 = T1;
        cand.alpha = 1.0 / spacing;
        cand.beta = T1 / spacing;
        const int j2r = radial ? ir + 2 * dir : ir;
        const int j2p = radial ? ip : ip + 2 * dir;
        if (j2r >= row_lo && j2r <= row_hi && j2p >= 0 && j2p < nphi) {
          const double T2 = field.dist[grid.node(j2r, j2p)];
          if (std::isfinite(T2) && T2 <= T1) {
            cand.alpha = 1.5 / spacing;
            cand.beta = (4.0 * T1 - T2) / (2.0 * spacing);
          }
        }
        if (!best.ok || T1 < best.t1) best = cand;
      }
      return best;
    };
    auto sweep_node = [&](int ir, int ip) {
      const int node = grid.node(ir, ip);
      AxisTerm ar = axis_term(ir, ip, true);
      AxisTerm ap = axis_term(ir, ip, false);
      double best = field.dist[node];
      auto solve = [&](const AxisTerm& x, const AxisTerm& y) {
        const double A = x.alpha * x.alpha + y.alpha * y.alpha;
        const double B = x.alpha * x.beta + y.alpha * y.beta;
        const double C = x.beta * x.beta + y.beta * y.beta - 1.0;
        const double disc = B * B - A * C;
        if (disc < 0.0) return;
        const double T = (B + std::sqrt(disc)) / A;
        if (T >= std::max(x.t1, y.t1) && T < best) best = T;
      };
      auto solve1 = [&](const AxisTerm& x) {
        // single-axis: alpha T - beta = 1
        const double T = (1.0 + x.beta) / x.alpha;
        if (T >= x.t1 && T < best) best = T;
      };
      if (ar.ok && ap.ok) solve(ar, ap);
      if (ar.ok) solve1(ar);
      if (ap.ok) solve1(ap);
      if (best < field.dist[node]) field.dist[node] = best;
    };
    for (int pass = 0; pass < 6; ++pass) {
      for (int ir = row_lo; ir <= row_hi; ++ir)
        for (int ip = 0; ip < nphi; ++ip) sweep_node(ir, ip);
      for (int ir = row_hi; ir >= row_lo; --ir)
        for (int ip = 0; ip < nphi; ++ip) sweep_node(ir, ip);
      for (int ir = row_lo; ir <= row_hi; ++ir)
        for (int ip = nphi - 1; ip >= 0; --ip) sweep_node(ir, ip);
      for (int ir = row_hi; ir >= row_lo; --ir)
        for (int ip = nphi - 1; ip >= 0; --ip) sweep_node(ir, ip);
    }
  }

  // Spot-check the 1-Lipschitz property along axis edges.
  int violations = 0;
  for (int ir = row_lo; ir < row_hi; ir += std::max(1, (row_hi - row_lo) / 64)) {
    for (int ip = 0; ip + 1 < nphi; ip += std::max(1, nphi / 64)) {
      const double a = field.dist[grid.node(ir, ip)];
      const double b = field.dist[grid.node(ir + 1, ip)];
      const double c = field.dist[grid.node(ir, ip + 1)];
      if (std::isfinite(a) && std::isfinite(b) &&
          std::abs(a - b) > grid.edge_length(ir, ip, 1, 0) + 1e-9)
        ++violations;
      if (std::isfinite(a) && std::isfinite(c) &&
          std::abs(a - c) > grid.edge_length(ir, ip, 0, 1) + 1e-9)
        ++violations;
    }
  }
  if (violations > 0) {
    field.lipschitz_ok = false;
    field.degraded = true;
  }
  return field;
}

DistanceResult distance_on_grid(const MetricGrid& grid, double r1, double r2, double dphi,
                                Stencil stencil, bool refine) {
  DistanceResult out;
  const RotSymManifold& M = grid.manifold();
  const int ir1 = grid.nearest_row(r1);
  const int ir2 = grid.nearest_row(r2);
  const int ip2 = grid.nearest_col(std::clamp(dphi, 0.0, M_PI));
  const double r1s = grid.r_at(ir1), r2s = grid.r_at(ir2);
  const double phis = grid.phi_at(ip2);

  const int src = grid.node(ir1, 0);
  const int dst = grid.node(ir2, ip2);
  if (src == dst) return out;

  DistanceField field = solve_distance_field(grid, src, stencil, -1, -1, dst);
  out.value = field.dist[dst];
  out.error_estimate = 0.03 * out.value + field.grid_tolerance;
  out.degraded = field.degraded;

  if (refine) {
    auto refined = clairaut_distance(M, r1s, r2s, phis, out.value + field.grid_tolerance);
    if (refined) {
      out.value = std::min(out.value, *refined);
      out.error_estimate = 1e-6 * std::max(1.0, out.value);
      out.refined = true;
    }
  }

  // Exact lower bound: net radial travel.
  const double radial = radial_length(M, r1s, r2s).value;
  out.value = std::max(out.value, radial);
  return out;
}

DistanceResult distance(const RotSymManifold& M, double r1, double r2, double dphi,
                        const GridOptions& opts) {
  MetricGrid grid(M, opts.nr, opts.nphi);
  return distance_on_grid(grid, r1, r2, dphi, opts.stencil, opts.refine);
}

namespace {

// Rows of the grid lying inside the region.
std::pair<int, int> region_rows(const MetricGrid& grid, const RegionSpec& R) {
  const double a = R.min(), b = R.max();
  int lo = grid.nearest_row(a);
  int hi = grid.nearest_row(b);
  if (grid.r_at(lo) < a - 1e-12) ++lo;
  if (grid.r_at(hi) > b + 1e-12) --hi;
  lo = std::clamp(lo, 0, grid.nr() - 1);
  hi = std::clamp(hi, 0, grid.nr() - 1);
  return {lo, hi};
}

}  // namespace

SupResult diameter(const RotSymManifold& M, const RegionSpec& R, DiameterMode mode,
                   const GridOptions& opts) {
  if (mode == DiameterMode::induced_in_R && R.intervals.size() > 1)
    throw ManifoldError("induced diameter needs a connected region");
  MetricGrid grid(M, opts.nr, opts.nphi);
  auto [lo, hi] = region_rows(grid, R);
  const int row_lo = (mode == DiameterMode::induced_in_R) ? lo : -1;
  const int row_hi = (mode == DiameterMode::induced_in_R) ? hi : -1;

  SupResult out;
  out.grid_tolerance = grid.cell_scale();

  // Rows whose coordinate lies inside the region (unions skip the gaps).
  std::vector<int> region_row_list;
  for (int ir = lo; ir <= hi; ++ir)
    if (R.contains(grid.r_at(ir))) region_row_list.push_back(ir);
  if (region_row_list.empty()) return out;

  // Distance between fibers is nondecreasing in the angular separation, so
  // the diameter is realized with dphi = pi; sweep source rows at phi = 0.
  const int seeds = std::min<std::size_t>(65, region_row_list.size());
  std::vector<int> rows;
  for (int k = 0; k < seeds; ++k)
    rows.push_back(region_row_list[static_cast<std::size_t>(
        std::llround(double(k) * (region_row_list.size() - 1) / std::max(1, seeds - 1)))]);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  std::vector<double> best_per_source(rows.size(), 0.0);
  std::vector<bool> degraded_flags(rows.size(), false);
  parallel_for(rows.size(), [&](std::size_t k) {
    const int src = grid.node(rows[k], 0);
    DistanceField field = solve_distance_field(grid, src, opts.stencil, row_lo, row_hi);
    double best = 0.0;
    for (int ir : region_row_list)
      for (int ip = 0; ip < grid.nphi(); ++ip) {
        const double d = field.dist[grid.node(ir, ip)];
        if (std::isfinite(d)) best = std::max(best, d);
      }
    best_per_source[k] = best;
    degraded_flags[k] = field.degraded;
  }, opts.threads);

  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.value = std::max(out.value, best_per_source[k]);
    out.degraded = out.degraded || degraded_flags[k];
  }
  return out;
}

SupResult lambda_gap(const RotSymManifold& M, const RegionSpec& Wj, const RegionSpec& Wk,
                     const GridOptions& opts) {
  if (Wk.intervals.size() > 1)
    throw ManifoldError("lambda gap needs a connected outer region");
  MetricGrid grid(M, opts.nr, opts.nphi);
  auto [jlo, jhi] = region_rows(grid, Wj);
  auto [klo, khi] = region_rows(grid, Wk);

  SupResult out;
  out.grid_tolerance = grid.cell_scale();
  if (jlo > jhi) return out;

  const int seeds = std::min(33, jhi - jlo + 1);
  std::vector<int> rows;
  for (int k = 0; k < seeds; ++k)
    rows.push_back(jlo + static_cast<int>(std::llround(double(k) * (jhi - jlo) / std::max(1, seeds - 1))));
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  std::vector<double> best_per_source(rows.size(), 0.0);
  std::vector<bool> degraded_flags(rows.size(), false);
  parallel_for(rows.size(), [&](std::size_t k) {
    const int src = grid.node(rows[k], 0);
    DistanceField induced = solve_distance_field(grid, src, opts.stencil, klo, khi);
    DistanceField global = solve_distance_field(grid, src, opts.stencil);
    double best = 0.0;
    for (int ir = jlo; ir <= jhi; ++ir)
      for (int ip = 0; ip < grid.nphi(); ++ip) {
        const int n = grid.node(ir, ip);
        if (std::isfinite(induced.dist[n]) && std::isfinite(global.dist[n]))
          best = std::max(best, induced.dist[n] - global.dist[n]);
      }
    best_per_source[k] = best;
    degraded_flags[k] = induced.degraded || global.degraded;
  }, opts.threads);

  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.value = std::max(out.value, best_per_source[k]);
    out.degraded = out.degraded || degraded_flags[k];
  }
  return out;
}

SupResult hausdorff_gap(const RotSymManifold& M, const RegionSpec& U, const GridOptions& opts) {
  (void)opts;
  SupResult out;
  if (U.empty()) throw ManifoldError("hausdorff_gap: empty region");
  // For r-interval regions the nearest point of U is reached radially, so the
  // sup over M of d(., U) is the largest radial distance from a complement
  // point to the interval's edge.
  auto dist_to_U = [&](double r) {
    if (U.contains(r)) return 0.0;
    double best = kInf;
    for (const auto& iv : U.intervals) {
      if (r < iv.a) best = std::min(best, radial_length(M, r, iv.a).value);
      if (r > iv.b) best = std::min(best, radial_length(M, iv.b, r).value);
    }
    return best;
  };
  const int samples = 1024;
  double best = 0.0, best_r = M.r_min;
  for (int i = 0; i <= samples; ++i) {
    const double r = M.r_min + (M.r_max - M.r_min) * i / samples;
    const double d = dist_to_U(r);
    if (d > best) {
      best = d;
      best_r = r;
    }
  }
  const double step = (M.r_max - M.r_min) / samples;
  auto [x, v] = golden_max(dist_to_U, std::max(M.r_min, best_r - step),
                           std::min(M.r_max, best_r + step));
  (void)x;
  out.value = std::max(best, v);
  out.grid_tolerance = 0.0;
  return out;
}

FlatLambdaResult flat_torus_lambda(double side, double j, double k) {
  (void)k;  // induced distance inside W_k is the in-square Euclidean one for any k >= j
  FlatLambdaResult out;
  const double a = 1.0 / j;
  const double lo = a, hi = side - a;
  FlatModelSpace torus = FlatModelSpace::torus(side);

  auto gap = [&](double x1, double y1, double x2, double y2) {
    const double d_sq = std::hypot(x2 - x1, y2 - y1);
    return d_sq - torus.distance(x1, y1, x2, y2);
  };

  // Coarse pair sweep plus corner candidates.
  const int n = 17;
  auto coord = [&](int i) { return lo + (hi - lo) * i / (n - 1); };
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2) {
          const double g = gap(coord(i1), coord(j1), coord(i2), coord(j2));
          if (g > out.sup_gap) {
            out.sup_gap = g;
            out.argmax_x[0] = coord(i1);
            out.argmax_x[1] = coord(j1);
            out.argmax_y[0] = coord(i2);
            out.argmax_y[1] = coord(j2);
          }
        }
  // Corner pairs are the analytic maximizer; include them exactly.
  const double corner = gap(lo, lo, hi, hi);
  if (corner > out.sup_gap) {
    out.sup_gap = corner;
    out.argmax_x[0] = out.argmax_x[1] = lo;
    out.argmax_y[0] = out.argmax_y[1] = hi;
  }
  // Supremum restricted to axis-aligned pairs, for comparison against the
  // reference value 2L' - 4/j.
  out.axis_gap = gap(lo, lo, hi, lo);
  return out;
}

double flat_diameter(const FlatModelSpace& space, DiameterMode /*mode*/) {
  // Both model spaces are convex in their natural charts, so restricted and
  // induced diameters agree.
  return space.diameter();
}

}  // namespace ghflat
