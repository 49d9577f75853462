#include "ghflat/checker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace ghflat {

using nlohmann::json;

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Growth detector for boundedness hypotheses: fitted log-log slope over the
// tail of the series. Values below `floor` count as flat.
Verdict bounded_verdict(const std::vector<double>& idx, const std::vector<double>& vals,
                        double floor, std::string& witness) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (std::isfinite(vals[k])) {
      x.push_back(idx[k]);
      y.push_back(std::max(vals[k], floor > 0 ? floor : 1e-12));
    }
  }
  if (x.size() < 2) {
    witness = "insufficient data";
    return Verdict::inconclusive;
  }
  auto fit = fit_loglog(x, y);
  std::ostringstream os;
  os << "log-log growth slope " << fit.slope << " over " << fit.points << " cells, last value "
     << y.back();
  witness = os.str();
  if (fit.slope <= 0.25) return Verdict::pass;
  return Verdict::fail;
}

// Decay-to-zero detector: fitted decay exponent > 0.5 and
// last value < 0.2 * first.
Verdict vanishing_verdict(const std::vector<double>& idx, const std::vector<double>& vals,
                          std::string& witness) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (std::isfinite(vals[k]) && vals[k] >= 0.0) {
      x.push_back(idx[k]);
      y.push_back(std::max(vals[k], 1e-14));
    }
  if (x.size() < 2) {
    witness = "insufficient data";
    return Verdict::inconclusive;
  }
  auto fit = fit_loglog(x, y);
  const double first = y.front(), last = y.back();
  std::ostringstream os;
  os << "decay exponent " << -fit.slope << ", first " << first << ", last " << last;
  witness = os.str();
  if (-fit.slope > 0.5 && last < 0.2 * first) return Verdict::pass;
  if (-fit.slope < 0.1 && last > 0.5 * first) return Verdict::fail;
  if (last < 1e-10) return Verdict::pass;
  return (-fit.slope > 0.5) ? Verdict::inconclusive : Verdict::fail;
}

}  // namespace

CodimClass codim_flag(const std::string& descriptor) {
  if (descriptor.find("point") != std::string::npos) return CodimClass::point;
  if (descriptor.find("codim-1") != std::string::npos) return CodimClass::codim_1;
  if (descriptor.find("codim-2") != std::string::npos ||
      descriptor.find("codimension 2") != std::string::npos)
    return CodimClass::codim_ge_2;
  return CodimClass::none;
}

std::string codim_name(CodimClass c) {
  switch (c) {
    case CodimClass::point: return "point";
    case CodimClass::codim_ge_2: return "codim >= 2";
    case CodimClass::codim_1: return "codim 1";
    case CodimClass::none: return "none";
  }
  return "none";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CheckWindow default_window(int i_max, int j_max, int k_max) {
  CheckWindow w;
  for (int i = 2; i <= i_max; i *= 2) w.i_list.push_back(i);
  if (w.i_list.empty() || w.i_list.back() != i_max) w.i_list.push_back(i_max);
  for (int j = 2; j <= j_max; j += std::max(1, j_max / 4)) w.j_list.push_back(j);
  if (w.j_list.back() != j_max) w.j_list.push_back(j_max);
  for (int k : {2, 4, 8}) {
    if (k <= k_max) w.k_list.push_back(k);
  }
  if (w.k_list.empty() || w.k_list.back() != k_max) w.k_list.push_back(k_max);
  return w;
}

namespace {

// Boundary spheres of an r-interval region: interval ends strictly inside the
// domain (not poles) contribute omega f^{m-1}.
double region_boundary_area(const RotSymManifold& M, const RegionSpec& R) {
  double total = 0.0;
  const double tol = 1e-9 * (M.r_max - M.r_min);
  for (const auto& iv : R.intervals) {
    for (double end : {iv.a, iv.b}) {
      if (end > M.r_min + tol && end < M.r_max - tol) total += boundary_area(M, end);
    }
  }
  return total;
}

RegionSpec region_complement(const RotSymManifold& M, const RegionSpec& R) {
  // Complement of a union of intervals within [r_min, r_max].
  std::vector<RegionSpec::Interval> sorted = R.intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });
  RegionSpec out;
  double cursor = M.r_min;
  for (const auto& iv : sorted) {
    if (iv.a > cursor) out.intervals.push_back({cursor, iv.a});
    cursor = std::max(cursor, iv.b);
  }
  if (cursor < M.r_max) out.intervals.push_back({cursor, M.r_max});
  return out;
}

double min_ricci_sweep(const RotSymManifold& M, int samples) {
  const double inset = 1e-3 * (M.r_max - M.r_min);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= samples; ++s) {
    const double r = M.r_min + inset + (M.r_max - M.r_min - 2 * inset) * s / samples;
    if (!(M.f->value(r) > 1e-9)) continue;
    CurvatureSample c = curvature_profile(M, r);
    worst = std::min({worst, c.Ric_rad, c.Ric_tan});
  }
  return worst;
}

// Sup gap at order 0 (values) or order 1 (first derivatives).
double sup_profile_gap(const ProfilePtr& p, const ProfilePtr& q, const RegionSpec& R, int order,
                       int samples = 512) {
  double worst = 0.0;
  for (const auto& iv : R.intervals) {
    if (!(iv.b > iv.a)) continue;
    for (int s = 0; s <= samples; ++s) {
      const double r = iv.a + (iv.b - iv.a) * s / samples;
      const double gap = order == 0 ? std::abs(p->value(r) - q->value(r))
                                    : std::abs(p->deriv1(r) - q->deriv1(r));
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

}  // namespace

HypothesisReport check_family(const std::string& family, const CheckWindow& window) {
  const ExampleSpec& ex = gallery_example(family);
  HypothesisReport rep;
  rep.family = family;
  rep.window = window;
  rep.codim = codim_flag(ex.singular_set);
  rep.exhaustion_connected = ex.exhaustion_connected;

  const std::size_t ni = window.i_list.size();
  const std::size_t nj = window.j_list.size();
  const std::size_t nk = window.k_list.size();
  rep.diam.assign(ni, std::vector<double>(nj, kNaN));
  rep.boundary_area.assign(ni, std::vector<double>(nj, kNaN));
  rep.excess_volume.assign(ni, std::vector<double>(nj, kNaN));
  rep.lambda.assign(ni, std::vector<std::vector<double>>(nj, std::vector<double>(nk, kNaN)));
  rep.min_ricci.assign(ni, kNaN);
  rep.sup_gap_f.assign(ni, std::vector<double>(nj, kNaN));
  rep.sup_gap_h.assign(ni, std::vector<double>(nj, kNaN));

  GridOptions gopts;
  gopts.nr = window.grid_nr;
  gopts.nphi = window.grid_nphi;
  gopts.threads = window.threads;

  if (ex.fidelity == Fidelity::flat) {
    // Flat model: closed forms; lambda from the analytic gap evaluator.
    FlatModelSpace torus = ex.flat_generator(1);
    for (std::size_t a = 0; a < ni; ++a) {
      rep.min_ricci[a] = 0.0;
      for (std::size_t b = 0; b < nj; ++b) {
        const int j = window.j_list[b];
        rep.diam[a][b] = flat_diameter(torus, DiameterMode::restricted_in_M);
        rep.boundary_area[a][b] = 4.0 * (torus.side - 2.0 / j);  // cross-boundary length
        rep.excess_volume[a][b] =
            torus.side * torus.side - std::pow(torus.side - 2.0 / j, 2);
        rep.sup_gap_f[a][b] = 0.0;
        rep.sup_gap_h[a][b] = 0.0;
        for (std::size_t c = 0; c < nk; ++c) {
          const int k = window.k_list[c];
          if (k < j) continue;
          rep.lambda[a][b][c] = flat_torus_lambda(torus.side, j, k).sup_gap;
        }
      }
    }
    rep.lambda_noise_floor = 0.0;
  } else if (ex.fidelity == Fidelity::full) {
    RotSymManifold limit = ex.limit();
    for (std::size_t a = 0; a < ni; ++a) {
      const int i = window.i_list[a];
      if (i < ex.i_min) continue;
      RotSymManifold Mi = ex.generator(i);
      rep.min_ricci[a] = min_ricci_sweep(Mi, window.curvature_samples);
      MetricGrid grid(Mi, gopts.nr, gopts.nphi);
      rep.lambda_noise_floor = std::max(rep.lambda_noise_floor, 2.0 * grid.cell_scale());
      for (std::size_t b = 0; b < nj; ++b) {
        const int j = window.j_list[b];
        RegionSpec Wj = ex.exhaustion(j, i);
        if (Wj.empty() || Wj.max() > Mi.r_max + 1e-9) continue;
        rep.diam[a][b] = diameter(Mi, Wj, DiameterMode::restricted_in_M, gopts).value;
        rep.boundary_area[a][b] = region_boundary_area(Mi, Wj);
        rep.excess_volume[a][b] = volume(Mi, region_complement(Mi, Wj)).value;
        if (limit.r_max >= Wj.max() && limit.r_min <= Wj.min()) {
          // orders 0 and 1: values and first derivatives both converge
          rep.sup_gap_f[a][b] =
              sup_profile_gap(Mi.f, limit.f, Wj, 0) + sup_profile_gap(Mi.f, limit.f, Wj, 1);
          rep.sup_gap_h[a][b] =
              sup_profile_gap(Mi.h, limit.h, Wj, 0) + sup_profile_gap(Mi.h, limit.h, Wj, 1);
        }
        if (ex.exhaustion_connected) {
          for (std::size_t c = 0; c < nk; ++c) {
            const int k = window.k_list[c];
            if (k < j) continue;
            RegionSpec Wk = ex.exhaustion(k, i);
            if (Wk.empty() || Wk.max() > Mi.r_max + 1e-9) continue;
            rep.lambda[a][b][c] = lambda_gap(Mi, Wj, Wk, gopts).value;
          }
        }
      }
    }
  }

  // ---- Verdicts -----------------------------------------------------------
  auto last_row = [&](const std::vector<std::vector<double>>& table) {
    std::vector<double> vals;
    for (std::size_t b = 0; b < nj; ++b) {
      // take the largest-i valid cell per j (hypotheses quantify i >= j)
      double v = kNaN;
      for (std::size_t a = 0; a < ni; ++a)
        if (std::isfinite(table[a][b])) v = table[a][b];
      vals.push_back(v);
    }
    return vals;
  };
  std::vector<double> jidx(window.j_list.begin(), window.j_list.end());
  std::vector<double> iidx(window.i_list.begin(), window.i_list.end());

  {  // m-diam: diam_{M_i}(W_j) bounded over the window (also across i).
    std::vector<double> flat_i;
    for (std::size_t a = 0; a < ni; ++a) {
      double worst = kNaN;
      for (std::size_t b = 0; b < nj; ++b)
        if (std::isfinite(rep.diam[a][b])) worst = std::isfinite(worst) ? std::max(worst, rep.diam[a][b]) : rep.diam[a][b];
      flat_i.push_back(worst);
    }
    std::string w1, w2;
    Verdict vi = bounded_verdict(iidx, flat_i, 0.0, w1);
    Verdict vj = bounded_verdict(jidx, last_row(rep.diam), 0.0, w2);
    rep.verdicts["m-diam"] = (vi == Verdict::fail || vj == Verdict::fail) ? Verdict::fail
                             : (vi == Verdict::pass && vj == Verdict::pass) ? Verdict::pass
                                                                            : Verdict::inconclusive;
    rep.witnesses["m-diam"] = "in i: " + w1 + "; in j: " + w2;
  }
  {  // m-area
    std::vector<double> flat_i;
    for (std::size_t a = 0; a < ni; ++a) {
      double worst = kNaN;
      for (std::size_t b = 0; b < nj; ++b)
        if (std::isfinite(rep.boundary_area[a][b]))
          worst = std::isfinite(worst) ? std::max(worst, rep.boundary_area[a][b]) : rep.boundary_area[a][b];
      flat_i.push_back(worst);
    }
    std::string w1, w2;
    Verdict vi = bounded_verdict(iidx, flat_i, 0.0, w1);
    Verdict vj = bounded_verdict(jidx, last_row(rep.boundary_area), 0.0, w2);
    rep.verdicts["m-area"] = (vi == Verdict::fail || vj == Verdict::fail) ? Verdict::fail
                             : (vi == Verdict::pass && vj == Verdict::pass) ? Verdict::pass
                                                                            : Verdict::inconclusive;
    rep.witnesses["m-area"] = "in i: " + w1 + "; in j: " + w2;
  }
  {  // m-edge-volume: V_j -> 0, evaluated on the largest-i row; but a growth
     // of V_j in i at fixed j also defeats the hypothesis.
    std::string w, wi;
    Verdict vj = vanishing_verdict(jidx, last_row(rep.excess_volume), w);
    std::vector<double> fixed_j;
    for (std::size_t a = 0; a < ni; ++a) fixed_j.push_back(rep.excess_volume[a][0]);
    Verdict vi = bounded_verdict(iidx, fixed_j, 0.0, wi);
    rep.verdicts["m-edge-volume"] = (vi == Verdict::fail) ? Verdict::fail : vj;
    rep.witnesses["m-edge-volume"] = "in j: " + w + "; in i at j0: " + wi;
  }
  {  // well-embedded: lambda_j -> 0 (iterated over k then i then j).
    if (!ex.exhaustion_connected) {
      rep.verdicts["well-embedded"] = Verdict::fail;
      rep.witnesses["well-embedded"] = "exhaustion is not connected";
    } else {
      std::vector<double> lambda_j;
      for (std::size_t b = 0; b < nj; ++b) {
        double v = kNaN;
        for (std::size_t a = 0; a < ni; ++a) {
          // limsup over k approximated by the largest computed k
          for (std::size_t c = nk; c-- > 0;) {
            if (std::isfinite(rep.lambda[a][b][c])) {
              v = std::isfinite(v) ? std::max(v, rep.lambda[a][b][c]) : rep.lambda[a][b][c];
              break;
            }
          }
        }
        lambda_j.push_back(v);
      }
      // Values at the grid-noise floor count as zero for the trend.
      bool all_noise = true;
      for (double v : lambda_j)
        if (std::isfinite(v) && v > rep.lambda_noise_floor) all_noise = false;
      std::string w;
      if (all_noise) {
        rep.verdicts["well-embedded"] = Verdict::pass;
        std::ostringstream os;
        os << "all lambda_j below noise floor " << rep.lambda_noise_floor;
        rep.witnesses["well-embedded"] = os.str();
      } else {
        Verdict v = vanishing_verdict(jidx, lambda_j, w);
        rep.verdicts["well-embedded"] = v;
        rep.witnesses["well-embedded"] = w;
      }
    }
  }
  {  // connectedness
    rep.verdicts["connectedness"] = ex.exhaustion_connected ? Verdict::pass : Verdict::fail;
    rep.witnesses["connectedness"] = ex.exhaustion_connected
                                         ? "exhaustion intervals are connected"
                                         : "exhaustion splits into two components";
  }
  {  // ricci lower bound: the window minimum must not diverge with i. A
     // sequence saturating toward the limit metric's value is a uniform
     // bound; steady multiplicative growth of the negative part is not.
    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> neg;
    for (double v : rep.min_ricci)
      if (std::isfinite(v)) {
        worst = std::min(worst, v);
        neg.push_back(std::max(-v, 1e-9));
      }
    std::ostringstream os;
    os << "min Ricci over window = " << worst;
    bool bounded = std::isfinite(worst) && worst > -1e3;
    if (neg.size() >= 2) {
      const double tail_ratio = neg.back() / std::max(neg[neg.size() - 2], 1e-9);
      os << ", tail growth ratio " << tail_ratio;
      bounded = bounded && (tail_ratio <= 1.6 || neg.back() < 1.0);
    }
    rep.verdicts["ricci-lower-bound"] = bounded ? Verdict::pass : Verdict::fail;
    rep.witnesses["ricci-lower-bound"] = os.str();
  }
  {  // smooth convergence at order 0 (sup gaps decreasing in i on each W_j)
    Verdict v = Verdict::pass;
    std::ostringstream os;
    for (std::size_t b = 0; b < nj && v == Verdict::pass; ++b) {
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < ni; ++a) {
        const double gap = std::isfinite(rep.sup_gap_f[a][b])
                               ? rep.sup_gap_f[a][b] + rep.sup_gap_h[a][b]
                               : kNaN;
        if (!std::isfinite(gap)) continue;
        if (gap > prev * 1.5 + 1e-9) {
          v = Verdict::fail;
          os << "gap grows at (i=" << window.i_list[a] << ", j=" << window.j_list[b] << ")";
          break;
        }
        prev = gap;
      }
    }
    if (v == Verdict::pass) os << "sup |f_i - f_inf| + |h_i - h_inf| trend nonincreasing";
    rep.verdicts["smooth-convergence"] = v;
    rep.witnesses["smooth-convergence"] = os.str();
  }

  // ---- Theorem routing ----------------------------------------------------
  auto passed = [&](const std::string& k) {
    auto it = rep.verdicts.find(k);
    return it != rep.verdicts.end() && it->second == Verdict::pass;
  };
  const bool codim2 = rep.codim == CodimClass::point || rep.codim == CodimClass::codim_ge_2;
  const bool volume_ok = passed("m-area") && passed("m-edge-volume");
  const bool base = passed("connectedness") && passed("smooth-convergence");
  if (base && volume_ok && passed("m-diam") && codim2) rep.routes.push_back("codim-thm");
  if (base && volume_ok && passed("m-diam") && passed("well-embedded"))
    rep.routes.push_back("flat-to-settled");
  if (base && volume_ok && passed("m-diam") && codim2 && passed("ricci-lower-bound"))
    rep.routes.push_back("Ricci-codim-thm");
  if (base && volume_ok && codim2) rep.routes.push_back("c-codim-thm (contractibility unverified)");
  return rep;
}

std::vector<RicciRow> check_ricci(const std::string& family, const std::vector<int>& i_list,
                                  double H, int samples) {
  const ExampleSpec& ex = gallery_example(family);
  if (ex.fidelity != Fidelity::full)
    throw std::invalid_argument(family + ": Ricci check needs a full-fidelity family");
  std::vector<RicciRow> rows;
  for (int i : i_list) {
    if (i < ex.i_min) continue;
    RotSymManifold M = ex.generator(i);
    RicciRow row;
    row.i = i;
    double worst_ric = std::numeric_limits<double>::infinity();
    double worst_sec = std::numeric_limits<double>::infinity();
    const double inset = 1e-3 * (M.r_max - M.r_min);
    for (int s = 0; s <= samples; ++s) {
      const double r = M.r_min + inset + (M.r_max - M.r_min - 2 * inset) * s / samples;
      if (!(M.f->value(r) > 1e-9)) continue;
      CurvatureSample c = curvature_profile(M, r);
      worst_ric = std::min({worst_ric, c.Ric_rad, c.Ric_tan});
      worst_sec = std::min({worst_sec, c.K_rad, c.K_tan});
      row.includes_blend_window = row.includes_blend_window || c.on_blend;
    }
    row.min_ricci = worst_ric;
    row.min_sectional = worst_sec;
    row.pass = worst_ric >= (M.m - 1) * H;
    rows.push_back(row);
  }
  return rows;
}

std::string report_to_json(const HypothesisReport& rep) {
  json j;
  j["family"] = rep.family;
  j["window"]["i"] = rep.window.i_list;
  j["window"]["j"] = rep.window.j_list;
  j["window"]["k"] = rep.window.k_list;
  auto table = [](const std::vector<std::vector<double>>& t) {
    json out = json::array();
    for (const auto& row : t) {
      json r = json::array();
      for (double v : row) {
        if (std::isfinite(v))
          r.push_back(v);
        else
          r.push_back(nullptr);
      }
      out.push_back(r);
    }
    return out;
  };
  j["tables"]["diam"] = table(rep.diam);
  j["tables"]["boundary_area"] = table(rep.boundary_area);
  j["tables"]["excess_volume"] = table(rep.excess_volume);
  j["tables"]["sup_gap_f"] = table(rep.sup_gap_f);
  j["tables"]["sup_gap_h"] = table(rep.sup_gap_h);
  {
    json lam = json::array();
    for (const auto& plane : rep.lambda) lam.push_back(table(plane));
    j["tables"]["lambda"] = lam;
  }
  {
    json ric = json::array();
    for (double v : rep.min_ricci) {
      if (std::isfinite(v))
        ric.push_back(v);
      else
        ric.push_back(nullptr);
    }
    j["tables"]["min_ricci"] = ric;
  }
  j["codim"] = codim_name(rep.codim);
  for (const auto& [k, v] : rep.verdicts) {
    j["verdicts"][k]["verdict"] = verdict_name(v);
    auto it = rep.witnesses.find(k);
    j["verdicts"][k]["witness"] = it == rep.witnesses.end() ? "" : it->second;
  }
  j["routes"] = rep.routes;
  j["unverified"] = rep.unverified;
  j["lambda_noise_floor"] = rep.lambda_noise_floor;
  return j.dump(2) + "\n";
}

}  // namespace ghflat
