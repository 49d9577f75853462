#include "ghflat/bridge.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "json.hpp"

namespace ghflat {

namespace {
constexpr double kStrict = 1e-6;  // strict-inequality margin on hemispherical widths
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

Separation min_separation(double eps, double diam1, double diam2) {
  if (eps < 0.0) throw BridgeError("min_separation: eps must be >= 0");
  const double theta = std::acos(1.0 / (1.0 + eps));
  Separation s;
  s.a1 = (1.0 + kStrict) * theta / M_PI * diam2;
  s.a2 = (1.0 + kStrict) * theta / M_PI * diam1;
  s.a = std::max(s.a1, s.a2);
  return s;
}

FillingBridge::FillingBridge(RotSymManifold g1, RotSymManifold g2, double D1, double D2, double t1,
                             double t2)
    : kind_(BaseKind::rotsym), single_(false), g1_(std::move(g1)), g2_(std::move(g2)), D1_(D1),
      D2_(D2), t1_(t1), t2_(t2) {
  if (g1_.m != g2_.m || std::abs(g1_.r_min - g2_.r_min) > 1e-12 ||
      std::abs(g1_.r_max - g2_.r_max) > 1e-12)
    throw BridgeError("bridge bases must share dimension and domain");
  if (!(t2_ > t1_)) throw BridgeError("bridge needs t2 > t1");
  // End-condition feasibility: G(t_i) = g_i needs psi_{3-i}(t_i)^2 g_{3-i} <= g_i.
  const double w = g1_.r_max - g1_.r_min;
  for (int i = 0; i <= 64; ++i) {
    const double r = g1_.r_min + w * i / 64.0;
    const double f1 = g1_.f->value(r), f2 = g2_.f->value(r);
    const double h1 = g1_.h->value(r), h2 = g2_.h->value(r);
    const double p2_at_1 = psi(2, t1_);
    const double p1_at_2 = psi(1, t2_);
    if (p2_at_1 * f2 > f1 + 1e-9 || p2_at_1 * h2 > h1 + 1e-9 || p1_at_2 * f1 > f2 + 1e-9 ||
        p1_at_2 * h1 > h2 + 1e-9)
      throw BridgeError("end condition unreachable: increase |t2-t1|");
  }
}

FillingBridge FillingBridge::suspension(RotSymManifold g, double D, double t_lo, double t_hi,
                                        double admissibility_scale) {
  FillingBridge b;
  b.kind_ = BaseKind::rotsym;
  b.single_ = true;
  b.g1_ = std::move(g);
  b.D1_ = D;
  b.t1_ = t_lo;
  b.t2_ = t_hi;
  b.admissibility_scale_ = admissibility_scale;
  return b;
}

FillingBridge FillingBridge::circle_suspension(double radius, double D, double t_lo, double t_hi,
                                               double admissibility_scale) {
  FillingBridge b;
  b.kind_ = BaseKind::circle;
  b.single_ = true;
  b.circle_radius_ = radius;
  b.D1_ = D;
  b.t1_ = t_lo;
  b.t2_ = t_hi;
  b.admissibility_scale_ = admissibility_scale;
  return b;
}

int FillingBridge::base_dim() const { return kind_ == BaseKind::circle ? 1 : g1_.m; }

double FillingBridge::psi(int side, double t) const {
  const double ti = side == 1 ? t1_ : t2_;
  const double Di = side == 1 ? D1_ : D2_;
  return std::max(std::cos((t - ti) * M_PI / Di), 0.0);
}

double FillingBridge::f_bridge(double r, double t) const {
  const double s = admissibility_scale_;
  if (kind_ == BaseKind::circle) {
    const double v = s * psi(1, t) * circle_radius_;
    return v;
  }
  const double f1 = g1_.f->value(r);
  if (single_) return s * psi(1, t) * f1;
  const double f2 = g2_.f->value(r);
  const double hem = std::max(psi(1, t) * f1, psi(2, t) * f2);
  const double cap = std::sqrt(f1 * f1 + f2 * f2);
  return std::min(hem, cap);
}

double FillingBridge::h_bridge(double r, double t) const {
  const double s = admissibility_scale_;
  if (kind_ == BaseKind::circle) return 1.0;
  const double h1 = g1_.h->value(r);
  if (single_) return s * psi(1, t) * h1;
  const double h2 = g2_.h->value(r);
  const double hem = std::max(psi(1, t) * h1, psi(2, t) * h2);
  const double cap = std::sqrt(h1 * h1 + h2 * h2);
  return std::min(hem, cap);
}

std::vector<std::string> FillingBridge::check_invariants(int nr, int nt, double tol) const {
  std::vector<std::string> violations;
  const double rlo = kind_ == BaseKind::circle ? 0.0 : g1_.r_min;
  const double rhi = kind_ == BaseKind::circle ? 0.0 : g1_.r_max;
  auto base_f = [&](int side, double r) {
    if (kind_ == BaseKind::circle) return circle_radius_;
    return side == 1 ? g1_.f->value(r) : g2_.f->value(r);
  };
  auto base_h = [&](int side, double r) {
    if (kind_ == BaseKind::circle) return 1.0;
    return side == 1 ? g1_.h->value(r) : g2_.h->value(r);
  };
  const int sides = single_ ? 1 : 2;
  for (int ir = 0; ir <= (kind_ == BaseKind::circle ? 0 : nr); ++ir) {
    const double r = kind_ == BaseKind::circle ? 0.0 : rlo + (rhi - rlo) * ir / nr;
    for (int it = 0; it <= nt; ++it) {
      const double t = t1_ + (t2_ - t1_) * it / nt;
      const double fb = f_bridge(r, t);
      const double hb = h_bridge(r, t);
      for (int side = 1; side <= sides; ++side) {
        const double ti = side == 1 ? t1_ : t2_;
        const double Di = side == 1 ? D1_ : D2_;
        if (std::abs(t - ti) < Di / 2.0) {
          const double want_f = std::cos((t - ti) * M_PI / Di) * base_f(side, r);
          const double want_h = std::cos((t - ti) * M_PI / Di) * base_h(side, r);
          if (fb < want_f - tol || hb < want_h - tol)
            violations.push_back("admissibility fails for side " + std::to_string(side) +
                                 " at (r=" + std::to_string(r) + ", t=" + std::to_string(t) + ")");
        }
      }
      if (!single_) {
        const double cap_f = std::sqrt(std::pow(base_f(1, r), 2) + std::pow(base_f(2, r), 2));
        const double cap_h = std::sqrt(std::pow(base_h(1, r), 2) + std::pow(base_h(2, r), 2));
        if (fb > cap_f + tol || hb > cap_h + tol)
          violations.push_back("cap exceeded at (r=" + std::to_string(r) +
                               ", t=" + std::to_string(t) + ")");
      }
    }
    // End conditions.
    for (int side = 1; side <= sides; ++side) {
      const double ti = side == 1 ? t1_ : t2_;
      if (std::abs(f_bridge(r, ti) - base_f(side, r)) > tol ||
          std::abs(h_bridge(r, ti) - base_h(side, r)) > tol)
        violations.push_back("end condition fails for side " + std::to_string(side) +
                             " at r=" + std::to_string(r));
    }
  }
  return violations;
}

namespace {

// Dijkstra over the bridge lattice. For rot-sym bases the lattice is
// (r, phi, t); for circle bases (phi, t). Metric is diagonal:
// h'^2 dr^2 + f'^2 dphi^2 + dt^2.
struct BridgeLattice {
  const FillingBridge* B;
  int nr, nphi, nt;
  double rlo, dr, dphi, dt;
  bool circle;
  std::vector<double> fb, hb;  // cached on (2nr-1) x (2nt-1) doubled lattice
  std::vector<bool> merged_row;

  BridgeLattice(const FillingBridge& bridge, const BridgeGridOptions& opts) : B(&bridge) {
    circle = bridge.base_kind() == FillingBridge::BaseKind::circle;
    nr = circle ? 1 : opts.nr;
    nphi = opts.nphi;
    nt = opts.nt;
    const auto& base = bridge.base(1);
    rlo = circle ? 0.0 : base.r_min;
    const double rhi = circle ? 0.0 : base.r_max;
    dr = nr > 1 ? (rhi - rlo) / (nr - 1) : 0.0;
    dphi = M_PI / (nphi - 1);
    dt = (bridge.t2() - bridge.t1()) / (nt - 1);

    const int R = 2 * nr - 1, T = 2 * nt - 1;
    fb.resize(static_cast<std::size_t>(R) * T);
    hb.resize(static_cast<std::size_t>(R) * T);
    for (int kr = 0; kr < R; ++kr)
      for (int kt = 0; kt < T; ++kt) {
        const double r = rlo + 0.5 * dr * kr;
        const double t = bridge.t1() + 0.5 * dt * kt;
        fb[static_cast<std::size_t>(kr) * T + kt] = bridge.f_bridge(r, t);
        hb[static_cast<std::size_t>(kr) * T + kt] = bridge.h_bridge(r, t);
      }
    merged_row.assign(nr, false);
    if (!circle)
      for (int ir = 0; ir < nr; ++ir)
        merged_row[ir] = bridge.base(1).f->value(rlo + dr * ir) < 1e-12;
  }

  double f_at(int kr, int kt) const { return fb[static_cast<std::size_t>(kr) * (2 * nt - 1) + kt]; }
  double h_at(int kr, int kt) const { return hb[static_cast<std::size_t>(kr) * (2 * nt - 1) + kt]; }

  int node(int ir, int ip, int it) const {
    if (merged_row[ir]) ip = 0;
    return (ir * nphi + ip) * nt + it;
  }
  int count() const { return nr * nphi * nt; }

  double edge(int ir, int ip, int it, int di, int dj, int dk) const {
    (void)ip;
    const double drr = di * dr, dpp = dj * dphi, dtt = dk * dt;
    auto speed = [&](int kr, int kt) {
      const double f = f_at(kr, kt);
      const double h = h_at(kr, kt);
      return std::sqrt(h * h * drr * drr + f * f * dpp * dpp + dtt * dtt);
    };
    const int kr0 = 2 * ir, kt0 = 2 * it;
    const int kr1 = 2 * (ir + di), kt1 = 2 * (it + dk);
    return (speed(kr0, kt0) + 4.0 * speed(kr0 + di, kt0 + dk) + speed(kr1, kt1)) / 6.0;
  }
};

std::vector<double> bridge_dijkstra(const BridgeLattice& L, int src, int dst = -1) {
  (void)dst;  // sweeps need the whole field
  std::vector<double> dist(L.count(), kInf);
  std::vector<bool> settled(L.count(), false);
  using QI = std::pair<double, int>;
  std::priority_queue<QI, std::vector<QI>, std::greater<QI>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});

  // Stencil: 26-neighborhood plus (2,1,0)-type knight moves.
  static std::vector<std::array<int, 3>> offsets = [] {
    std::vector<std::array<int, 3>> out;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          if (a || b || c) out.push_back({a, b, c});
    const int knights[6][3] = {{2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {0, 2, 1}, {1, 0, 2}, {0, 1, 2}};
    for (const auto& k : knights)
      for (int sa = -1; sa <= 1; sa += 2)
        for (int sb = -1; sb <= 1; sb += 2) {
          std::array<int, 3> v{};
          int idx = 0;
          for (int i = 0; i < 3; ++i) {
            int val = k[i];
            if (val == 0) {
              v[i] = 0;
              continue;
            }
            v[i] = val * ((idx++ == 0) ? sa : sb);
          }
          out.push_back(v);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }();

  // node -> representative coordinates
  auto coords = [&](int n) {
    const int it = n % L.nt;
    const int rest = n / L.nt;
    const int ip = rest % L.nphi;
    const int ir = rest / L.nphi;
    return std::array<int, 3>{ir, ip, it};
  };

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (settled[u] || d > dist[u]) continue;
    settled[u] = true;
    const auto [ir, ip0, it] = coords(u);
    const bool merged = L.merged_row[ir];
    const int lo = merged ? 0 : ip0;
    const int hi = merged ? L.nphi - 1 : ip0;
    for (int ip = lo; ip <= hi; ++ip) {
      for (const auto& off : offsets) {
        const int jr = ir + off[0];
        const int jp = ip + off[1];
        const int jt = it + off[2];
        if (jr < 0 || jr >= L.nr || jp < 0 || jp >= L.nphi || jt < 0 || jt >= L.nt) continue;
        const int v = L.node(jr, jp, jt);
        if (settled[v]) continue;
        const double cand = d + L.edge(ir, ip, it, off[0], off[1], off[2]);
        if (cand < dist[v]) {
          dist[v] = cand;
          pq.push({cand, v});
        }
      }
    }
  }

  // Axis-quadratic eikonal sweeps. The graph stencil's angular resolution
  // degrades when the three physical step sizes differ; the upwind quadratic
  // update is first-order consistent regardless of that anisotropy.
  auto sweep_node = [&](int ir, int ip, int it) {
    const int node = L.node(ir, ip, it);
    struct Term {
      double t1, inv;
    };
    Term terms[3];
    int nterms = 0;
    auto axis = [&](int dr, int dp, int dtt, double spacing) {
      if (!(spacing > 0.0)) return;
      double best_t = kInf;
      for (int dir = -1; dir <= 1; dir += 2) {
        const int jr = ir + dir * dr, jp = ip + dir * dp, jt = it + dir * dtt;
        if (jr < 0 || jr >= L.nr || jp < 0 || jp >= L.nphi || jt < 0 || jt >= L.nt) continue;
        best_t = std::min(best_t, dist[L.node(jr, jp, jt)]);
      }
      if (std::isfinite(best_t)) terms[nterms++] = {best_t, 1.0 / spacing};
    };
    const double f_here = L.f_at(2 * ir, 2 * it);
    const double h_here = L.h_at(2 * ir, 2 * it);
    if (!L.circle) axis(1, 0, 0, h_here * L.dr);
    axis(0, 1, 0, f_here * L.dphi);
    axis(0, 0, 1, L.dt);
    if (nterms == 0) return;
    std::sort(terms, terms + nterms, [](const Term& a, const Term& b) { return a.t1 < b.t1; });
    double best = dist[node];
    for (int use = nterms; use >= 1; --use) {
      double A = 0, B = 0, C = -1.0;
      for (int k = 0; k < use; ++k) {
        A += terms[k].inv * terms[k].inv;
        B += terms[k].t1 * terms[k].inv * terms[k].inv;
        C += terms[k].t1 * terms[k].t1 * terms[k].inv * terms[k].inv;
      }
      const double disc = B * B - A * C;
      if (disc < 0.0) continue;
      const double T = (B + std::sqrt(disc)) / A;
      if (T >= terms[use - 1].t1) {
        if (T < best) best = T;
        break;  // causal solution found; smaller subsets are not better
      }
    }
    if (best < dist[node]) dist[node] = best;
  };
  for (int pass = 0; pass < 2; ++pass)
    for (int sweep = 0; sweep < 8; ++sweep) {
      const bool rev_r = sweep & 1, rev_p = sweep & 2, rev_t = sweep & 4;
      for (int ir = 0; ir < L.nr; ++ir)
        for (int ip = 0; ip < L.nphi; ++ip)
          for (int it = 0; it < L.nt; ++it)
            sweep_node(rev_r ? L.nr - 1 - ir : ir, rev_p ? L.nphi - 1 - ip : ip,
                       rev_t ? L.nt - 1 - it : it);
    }
  return dist;
}

}  // namespace

double bridge_distance(const FillingBridge& B, double r1, double t_a, double r2, double dphi,
                       double t_b, const BridgeGridOptions& opts) {
  BridgeLattice L(B, opts);
  auto row = [&](double r) {
    if (L.circle) return 0;
    return std::clamp(static_cast<int>(std::lround((r - L.rlo) / L.dr)), 0, L.nr - 1);
  };
  auto col = [&](double phi) {
    return std::clamp(static_cast<int>(std::lround(phi / L.dphi)), 0, L.nphi - 1);
  };
  auto lev = [&](double t) {
    return std::clamp(static_cast<int>(std::lround((t - B.t1()) / L.dt)), 0, L.nt - 1);
  };
  const int src = L.node(row(r1), 0, lev(t_a));
  const int dst = L.node(row(r2), col(std::clamp(dphi, 0.0, M_PI)), lev(t_b));
  if (src == dst) return 0.0;
  auto dist = bridge_dijkstra(L, src, dst);
  return dist[dst];
}

EmbeddingReport verify_geodesic_embedding(const FillingBridge& B, int side,
                                          const std::vector<EmbeddingSample>& samples,
                                          const BridgeGridOptions& opts) {
  EmbeddingReport report;
  BridgeLattice L(B, opts);
  report.grid_tolerance = std::hypot(L.dr * 2.0, std::hypot(L.dphi * 2.0, L.dt * 2.0));
  const double t_side = side == 1 ? B.t1() : B.t2();

  report.violations.resize(samples.size());
  std::optional<MetricGrid> base_grid;
  if (B.base_kind() == FillingBridge::BaseKind::rotsym)
    base_grid.emplace(B.base(side), std::max(2 * opts.nr, 129), std::max(2 * opts.nphi, 129));

  parallel_for(samples.size(), [&](std::size_t k) {
    const auto& s = samples[k];
    double base_len;
    if (B.base_kind() == FillingBridge::BaseKind::circle) {
      base_len = B.circle_radius() * std::clamp(s.dphi, 0.0, M_PI);
    } else {
      base_len = distance_on_grid(*base_grid, s.r1, s.r2, s.dphi, Stencil::dijkstra16, true).value;
    }
    BridgeGridOptions local = opts;
    const double d_bridge = bridge_distance(B, s.r1, t_side, s.r2, s.dphi, t_side, local);
    report.violations[k] = base_len - d_bridge;
  }, opts.threads);

  for (double v : report.violations) report.max_violation = std::max(report.max_violation, v);
  return report;
}

CrossDistanceResult cross_distance_check(const FillingBridge& B, double r_q1, double r_q2,
                                         double dphi, const BridgeGridOptions& opts) {
  if (B.single_ended()) throw BridgeError("cross_distance_check needs a two-ended bridge");
  CrossDistanceResult out;
  out.measured = bridge_distance(B, r_q1, B.t1(), r_q2, dphi, B.t2(), opts);

  MetricGrid base_grid(B.base(1), 257, 257);
  out.lower_bound_base = distance_on_grid(base_grid, r_q1, r_q2, dphi, Stencil::dijkstra16, true).value;

  const double D1 = B.D(1);
  const double dt = std::abs(B.t2() - B.t1());
  const double arg = std::cos(M_PI * out.lower_bound_base / D1) * std::cos(M_PI * dt / D1);
  out.lower_bound_spherical = D1 / M_PI * std::acos(std::clamp(arg, -1.0, 1.0));
  return out;
}

BridgeVolumes bridge_volumes(const FillingBridge& B) {
  BridgeVolumes out;
  const double t1 = B.t1(), t2 = B.t2();
  if (B.base_kind() == FillingBridge::BaseKind::circle) {
    auto q = integrate([&](double t) { return 2.0 * M_PI * B.f_bridge(0.0, t); }, t1, t2);
    out.filling = q.value;
    out.lateral = 0.0;
    out.filling_cap = (t2 - t1) * 2.0 * M_PI * B.circle_radius() * (B.single_ended() ? 1.0 : 2.0);
    out.lateral_cap = 0.0;
    return out;
  }
  const auto& base = B.base(1);
  const int m = base.m;
  const double omega = unit_sphere_area(m - 1);

  auto slice = [&](double t) {
    auto q = integrate(
        [&](double r) { return B.h_bridge(r, t) * std::pow(B.f_bridge(r, t), m - 1); },
        base.r_min, base.r_max);
    return omega * q.value;
  };
  auto qt = integrate(slice, t1, t2);
  out.filling = qt.value;

  // Lateral boundary: level spheres at domain ends that are genuine boundary
  // (f > 0 there, i.e. not poles).
  double lateral = 0.0;
  for (double r_end : {base.r_min, base.r_max}) {
    if (base.f->value(r_end) < 1e-12) continue;
    auto q = integrate([&](double t) { return omega * std::pow(B.f_bridge(r_end, t), m - 1); }, t1,
                       t2);
    lateral += q.value;
  }
  out.lateral = lateral;

  double vol_sum = volume(base, base.full_region()).value;
  double area_sum = 0.0;
  for (double r_end : {base.r_min, base.r_max})
    if (base.f->value(r_end) >= 1e-12) area_sum += boundary_area(base, r_end);
  if (!B.single_ended()) {
    const auto& b2 = B.base(2);
    vol_sum += volume(b2, b2.full_region()).value;
    for (double r_end : {b2.r_min, b2.r_max})
      if (b2.f->value(r_end) >= 1e-12) area_sum += boundary_area(b2, r_end);
  }
  out.filling_cap = (t2 - t1) * vol_sum;
  out.lateral_cap = (t2 - t1) * area_sum;
  return out;
}

std::string bridge_to_json(const FillingBridge& B, int nr, int nt) {
  nlohmann::json j;
  const bool circle = B.base_kind() == FillingBridge::BaseKind::circle;
  const double rlo = circle ? 0.0 : B.base(1).r_min;
  const double rhi = circle ? 0.0 : B.base(1).r_max;
  j["t1"] = B.t1();
  j["t2"] = B.t2();
  j["D1"] = B.D(1);
  if (!B.single_ended()) j["D2"] = B.D(2);
  j["base"] = circle ? "circle" : "rotsym";
  j["r"] = nlohmann::json::array();
  j["t"] = nlohmann::json::array();
  j["f_bridge"] = nlohmann::json::array();
  j["h_bridge"] = nlohmann::json::array();
  const int R = circle ? 1 : nr;
  for (int ir = 0; ir < R; ++ir) j["r"].push_back(rlo + (R > 1 ? (rhi - rlo) * ir / (R - 1) : 0.0));
  for (int it = 0; it < nt; ++it) j["t"].push_back(B.t1() + (B.t2() - B.t1()) * it / (nt - 1));
  for (int ir = 0; ir < R; ++ir) {
    nlohmann::json frow = nlohmann::json::array(), hrow = nlohmann::json::array();
    const double r = j["r"][ir].get<double>();
    for (int it = 0; it < nt; ++it) {
      const double t = j["t"][it].get<double>();
      frow.push_back(B.f_bridge(r, t));
      hrow.push_back(B.h_bridge(r, t));
    }
    j["f_bridge"].push_back(frow);
    j["h_bridge"].push_back(hrow);
  }
  return j.dump(2) + "\n";
}

}  // namespace ghflat
