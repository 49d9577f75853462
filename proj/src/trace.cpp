#include "ghflat/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ghflat/checker.hpp"
#include "ghflat/gallery.hpp"
#include "ghflat/geodesic.hpp"

namespace ghflat {

namespace {

RegionSpec complement_of(const RotSymManifold& M, const RegionSpec& R) {
  std::vector<RegionSpec::Interval> sorted = R.intervals;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  RegionSpec out;
  double cursor = M.r_min;
  for (const auto& iv : sorted) {
    if (iv.a > cursor) out.intervals.push_back({cursor, iv.a});
    cursor = std::max(cursor, iv.b);
  }
  if (cursor < M.r_max) out.intervals.push_back({cursor, M.r_max});
  return out;
}

double interval_boundary_area(const RotSymManifold& M, const RegionSpec& R) {
  double total = 0.0;
  const double tol = 1e-9 * (M.r_max - M.r_min);
  for (const auto& iv : R.intervals)
    for (double end : {iv.a, iv.b})
      if (end > M.r_min + tol && end < M.r_max - tol) total += boundary_area(M, end);
  return total;
}

}  // namespace

ConvergenceTrace flat_convergence_trace(const std::string& family, const TraceOptions& opts) {
  const ExampleSpec& ex = gallery_example(family);
  if (ex.fidelity != Fidelity::full)
    throw std::invalid_argument(family + ": trace needs a full-fidelity family");
  ConvergenceTrace trace;

  GridOptions gopts;
  gopts.nr = opts.grid_nr;
  gopts.nphi = opts.grid_nphi;
  gopts.threads = opts.threads;

  RotSymManifold N = ex.limit();

  struct Cell {
    int i, j;
  };
  std::vector<Cell> cells;
  if (opts.diagonal_only) {
    for (std::size_t t = 0; t < std::min(opts.i_list.size(), opts.j_list.size()); ++t)
      cells.push_back({opts.i_list[t], opts.j_list[t]});
  } else {
    for (int i : opts.i_list)
      for (int j : opts.j_list) cells.push_back({i, j});
  }

  // --- first pass: per-cell raw quantities ---------------------------------
  struct Raw {
    double eps = 0.0, lambda = 0.0, diam = 0.0, vol_M = 0.0, V_j = 0.0, A_j = 0.0, H_i = 0.0;
    bool valid = false;
    bool eps_unbounded = false;
  };
  std::vector<Raw> raw(cells.size());

  parallel_for(cells.size(), [&](std::size_t idx) {
    const auto [i, j] = cells[idx];
    if (i < ex.i_min) return;
    RotSymManifold Mi = ex.generator(i);
    RegionSpec Wj = ex.exhaustion(j, i);
    RegionSpec Wk = ex.exhaustion(opts.k_max, i);
    if (Wj.empty() || Wj.max() > Mi.r_max + 1e-9) return;
    if (Wk.max() > Mi.r_max + 1e-9) Wk = Mi.full_region();
    Raw& r = raw[idx];
    auto eres = metric_ratio_epsilon(Mi, N, Wj);
    r.eps_unbounded = !eres.bi_lipschitz;
    r.eps = eres.bi_lipschitz ? eres.epsilon : 1e6;
    r.lambda = lambda_gap(Mi, Wj, Wk, gopts).value;
    r.diam = diameter(Mi, Wj, DiameterMode::restricted_in_M, gopts).value;
    r.vol_M = volume(Mi, Mi.full_region()).value;
    r.V_j = volume(Mi, complement_of(Mi, Wj)).value;
    r.A_j = interval_boundary_area(Mi, Wj);
    r.H_i = hausdorff_gap(Mi, Wj).value;
    r.valid = true;
  }, opts.threads);

  // --- empirical window constants ------------------------------------------
  double D0 = 0.0, lambda0 = 0.0;
  trace.V0 = 0.0;
  trace.A0 = 0.0;
  for (const Raw& r : raw) {
    if (!r.valid) continue;
    D0 = std::max(D0, r.diam);
    lambda0 = std::max(lambda0, r.lambda);
    trace.V0 = std::max(trace.V0, r.vol_M);
    trace.A0 = std::max(trace.A0, r.A_j);
  }

  // --- F-terms: epsilon = 0 subdiffeo bound on (W_j inside W_kmax, g_inf),
  //     i-independent, cached per j. --------------------------------------
  std::map<int, double> F_of_j;
  for (const auto& cell : cells) {
    if (F_of_j.count(cell.j)) continue;
    RegionSpec Wj = ex.exhaustion(cell.j, ex.i_min > 1 ? std::max(32, ex.i_min) : 32);
    RegionSpec Wk = ex.exhaustion(opts.k_max, ex.i_min > 1 ? std::max(32, ex.i_min) : 32);
    if (Wj.empty() || Wj.max() > N.r_max + 1e-9) {
      F_of_j[cell.j] = 0.0;
      continue;
    }
    if (Wk.max() > N.r_max + 1e-9) Wk = N.full_region();
    BoundInputs in;
    in.m = N.m;
    in.eps = 0.0;
    in.lambda = lambda_gap(N, Wj, Wk, gopts).value;
    in.D_U1 = diameter(N, Wj, DiameterMode::restricted_in_M, gopts).value + in.lambda;
    in.D_U2 = in.D_U1;
    const double Vj = volume(N, Wj).value;
    in.V1 = in.V2 = Vj;
    in.A1 = in.A2 = interval_boundary_area(N, Wj);
    RegionSpec between;
    between.intervals = complement_of(N, Wj).intervals;  // N \ W_j (contains Wk \ Wj)
    in.X1 = volume(N, between).value;
    in.X2 = in.X1;
    F_of_j[cell.j] = subdiffeo_bounds(in).d_F;
  }

  // --- assemble rows ---------------------------------------------------------
  const int m = N.m;
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const Raw& r = raw[idx];
    if (!r.valid) continue;
    TraceRow row;
    row.i = cells[idx].i;
    row.j = cells[idx].j;
    row.epsilon = r.eps;
    row.lambda = r.lambda;
    const double scale = D0 + lambda0;
    row.a = hemispherical_width(r.eps, 2.0 * scale);
    row.h = std::sqrt(r.lambda * (scale + r.lambda / 4.0));
    row.hbar = std::max(row.h, std::sqrt(r.eps * r.eps + 2.0 * r.eps) * scale);
    row.V_excess = r.V_j;
    row.F_term = F_of_j[row.j];
    row.d_F_bound = (row.hbar + row.a) * (2.0 * trace.V0 + 2.0 * trace.A0) + 2.0 * r.V_j + row.F_term;
    row.d_GH_bound = row.a + 2.0 * row.hbar + r.H_i;
    row.d_sF_bound = std::pow(std::max(0.0, 2.0 * trace.V0 * (row.hbar + row.a)), 1.0 / (m + 1)) +
                     std::pow(std::max(0.0, (2.0 * row.hbar + row.a) * 2.0 * trace.A0 + 2.0 * r.V_j),
                              1.0 / m);
    row.divergent_flag = r.eps_unbounded;
    trace.rows.push_back(row);
  }

  // Diagonal limsup estimate and divergence flag: epsilon must shrink with i
  // on every fixed j for the smooth-convergence premise to hold.
  std::map<int, std::pair<double, double>> eps_first_last;  // j -> (first, last)
  for (const auto& row : trace.rows) {
    auto it = eps_first_last.find(row.j);
    if (it == eps_first_last.end())
      eps_first_last[row.j] = {row.epsilon, row.epsilon};
    else
      it->second.second = row.epsilon;
  }
  for (const auto& [j, fl] : eps_first_last) {
    if (fl.second > 0.02 && fl.second > 0.75 * fl.first) trace.divergent = true;
  }
  if (!trace.rows.empty()) {
    double best = trace.rows.back().d_F_bound;
    for (const auto& row : trace.rows) best = std::min(best, row.d_F_bound);
    trace.diagonal_limsup = best;
  }
  return trace;
}

}  // namespace ghflat
