// ghflat: distance bounds and singular-limit diagnostics for rotationally
// symmetric metrics.
//
// Subcommands:
//   gallery list | gallery run <name> [--imax N] [--jmax N] [--kmax N]
//   bounds (squeeze|subdiffeo|convex) [numeric flags | --from-family NAME --i I --j J] [--trace CSV]
//   distance --profile FILE --r1 X --r2 Y --dphi P [--refine]
//   check <family>
//
// Exit codes: 0 = all checks pass, 1 = checks ran but some failed,
// 2 = usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ghflat/checker.hpp"
#include "ghflat/config.hpp"
#include "ghflat/geodesic.hpp"
#include "ghflat/trace.hpp"
#include "json.hpp"

using namespace ghflat;

namespace {

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

RotSymManifold manifold_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(ss.str());
  RotSymManifold M;
  M.m = j.at("m").get<int>();
  M.r_min = j.at("domain").at(0).get<double>();
  M.r_max = j.at("domain").at(1).get<double>();
  M.f = piecewise_from_json(j.at("f").dump());
  M.h = piecewise_from_json(j.at("h").dump());
  if (j.contains("poles")) {
    M.pole_min = j["poles"].value("min", false);
    M.pole_max = j["poles"].value("max", false);
  }
  M.claim_smooth_min = M.claim_smooth_max = false;
  M.name = j.value("name", path);
  validate(M);
  return M;
}

int cmd_gallery_list() {
  for (const auto& name : gallery_names()) std::cout << name << "\n";
  return 0;
}

int cmd_gallery_run(const std::string& name, const RunConfig& cfg, int i_probe,
                    const std::string& out_prefix) {
  if (!gallery_has(name)) {
    std::cerr << "unknown example '" << name << "'. Known examples:\n";
    for (const auto& n : gallery_names()) std::cerr << "  " << n << "\n";
    return 2;
  }
  CheckWindow w = default_window(cfg.i_max, cfg.j_max, cfg.k_max);
  w.grid_nr = cfg.grid_nr;
  w.grid_nphi = cfg.grid_nphi;
  w.threads = cfg.threads;
  HypothesisReport rep = check_family(name, w);
  const std::string report_path = out_prefix + name + ".report.json";
  write_file(report_path, report_to_json(rep));

  ClaimOptions copts;
  copts.grid_nr = cfg.grid_nr;
  copts.grid_nphi = cfg.grid_nphi;
  copts.i_probe = i_probe > 0 ? i_probe : cfg.i_max;
  copts.threads = cfg.threads;
  auto results = evaluate_claims(name, copts);
  bool all_pass = true;
  std::cout << name << ": " << gallery_example(name).summary << "\n";
  std::cout << "report: " << report_path << "\n";
  nlohmann::json claims_json;
  claims_json["family"] = name;
  claims_json["claims"] = nlohmann::json::array();
  for (const auto& r : results) {
    std::cout << (r.pass ? "  pass  " : "  FAIL  ") << r.name << " [" << r.kind << "] "
              << r.detail << "\n";
    nlohmann::json jc;
    jc["name"] = r.name;
    jc["kind"] = r.kind;
    jc["pass"] = r.pass;
    jc["measured"] = r.measured;
    jc["expected"] = r.expected;
    jc["detail"] = r.detail;
    claims_json["claims"].push_back(jc);
    all_pass = all_pass && r.pass;
  }
  claims_json["all_pass"] = all_pass;
  const std::string claims_path = out_prefix + name + ".claims.json";
  write_file(claims_path, claims_json.dump(2) + "\n");
  std::cout << "claims: " << claims_path << "\n";
  std::cout << "routes:";
  if (rep.routes.empty()) std::cout << " none";
  for (const auto& r : rep.routes) std::cout << " " << r;
  std::cout << "\n";
  return all_pass ? 0 : 1;
}

int cmd_bounds(const std::string& which, const BoundInputs& in, bool from_family,
               const std::string& family, int i, int j, const std::string& trace_csv,
               const RunConfig& cfg) {
  BoundReport rep;
  if (from_family) {
    if (!gallery_has(family)) {
      std::cerr << "unknown example '" << family << "'\n";
      return 2;
    }
    TraceOptions topts;
    topts.i_list = {i};
    topts.j_list = {j};
    topts.k_max = cfg.k_max;
    topts.grid_nr = cfg.grid_nr;
    topts.grid_nphi = cfg.grid_nphi;
    topts.threads = cfg.threads;
    auto trace = flat_convergence_trace(family, topts);
    if (trace.rows.empty()) {
      std::cerr << "family window produced no valid cells\n";
      return 2;
    }
    const TraceRow& row = trace.rows.front();
    BoundInputs fam;
    fam.m = 3;
    fam.eps = row.epsilon;
    fam.lambda = row.lambda;
    fam.D_U1 = fam.D_U2 = row.a > 0 ? row.a * M_PI / (2.0 * std::acos(1.0 / (1.0 + row.epsilon))
                                              / (1.0 + 1e-6))
                                    : 0.0;
    // Report the trace row directly; its fields already compose the formulas.
    rep.a = row.a;
    rep.h = row.h;
    rep.hbar = row.hbar;
    rep.d_GH = row.d_GH_bound;
    rep.d_F = row.d_F_bound;
    rep.d_sF = row.d_sF_bound;
    rep.provenance = which + " via family " + family;
    std::cout << bound_report_to_json(rep);
    return 0;
  }
  if (which == "squeeze")
    rep = squeeze_bounds(in);
  else if (which == "subdiffeo")
    rep = subdiffeo_bounds(in);
  else
    rep = convex_bounds(in);
  std::cout << bound_report_to_json(rep);

  if (!trace_csv.empty()) {
    std::cerr << "--trace requires --from-family\n";
    return 2;
  }
  return 0;
}

int cmd_trace(const std::string& family, const std::string& csv_path, const RunConfig& cfg) {
  if (!gallery_has(family)) {
    std::cerr << "unknown example '" << family << "'\n";
    return 2;
  }
  TraceOptions topts;
  for (int i = 4; i <= cfg.i_max; i *= 2) topts.i_list.push_back(i);
  for (int j = 2; j <= cfg.j_max; j *= 2) topts.j_list.push_back(j);
  topts.k_max = cfg.k_max;
  topts.grid_nr = cfg.grid_nr;
  topts.grid_nphi = cfg.grid_nphi;
  topts.threads = cfg.threads;
  auto trace = flat_convergence_trace(family, topts);
  const std::string csv = trace_to_csv(trace);
  if (!csv_path.empty()) {
    if (!write_file(csv_path, csv)) {
      std::cerr << "cannot write " << csv_path << "\n";
      return 2;
    }
    std::cout << "trace written to " << csv_path << "\n";
  } else {
    std::cout << csv;
  }
  if (trace.divergent) std::cout << "flag: divergent (epsilon does not shrink with i)\n";
  return 0;
}

int cmd_distance(const std::string& profile, double r1, double r2, double dphi, bool refine,
                 const RunConfig& cfg) {
  RotSymManifold M = manifold_from_file(profile);
  GridOptions opts;
  opts.nr = cfg.grid_nr;
  opts.nphi = cfg.grid_nphi;
  opts.stencil = cfg.grid_stencil == "fmm8" ? Stencil::fmm8 : Stencil::dijkstra16;
  opts.refine = refine;
  auto d = distance(M, r1, r2, dphi, opts);
  nlohmann::json j;
  j["distance"] = d.value;
  j["error_estimate"] = d.error_estimate;
  j["refined"] = d.refined;
  j["degraded"] = d.degraded;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_check(const std::string& family, const RunConfig& cfg) {
  if (!gallery_has(family)) {
    std::cerr << "unknown example '" << family << "'\n";
    return 2;
  }
  CheckWindow w = default_window(cfg.i_max, cfg.j_max, cfg.k_max);
  w.grid_nr = cfg.grid_nr;
  w.grid_nphi = cfg.grid_nphi;
  w.threads = cfg.threads;
  auto rep = check_family(family, w);
  std::cout << report_to_json(rep);
  bool all_pass = true;
  for (const auto& [k, v] : rep.verdicts) all_pass = all_pass && v == Verdict::pass;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distance bounds and singular-limit diagnostics for warped-product metrics"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (merged under explicit flags)");

  // gallery
  auto* gallery = app.add_subcommand("gallery", "list examples or run one");
  auto* glist = gallery->add_subcommand("list", "print the example names");
  auto* grun = gallery->add_subcommand("run", "evaluate an example's claims");
  std::string grun_name;
  int grun_imax = 0, grun_jmax = 0, grun_kmax = 0, grun_iprobe = 0;
  std::string grun_out = "./";
  grun->add_option("name", grun_name, "example name")->required();
  grun->add_option("--imax", grun_imax, "largest family index");
  grun->add_option("--jmax", grun_jmax, "largest exhaustion index");
  grun->add_option("--kmax", grun_kmax, "largest lambda index");
  grun->add_option("--i", grun_iprobe, "family index for per-member claims");
  grun->add_option("--out", grun_out, "output prefix for the report JSON");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "evaluate the explicit distance-bound formulas");
  std::string bwhich;
  bounds->add_option("formula", bwhich, "squeeze | subdiffeo | convex")
      ->required()
      ->check(CLI::IsMember({"squeeze", "subdiffeo", "convex"}));
  BoundInputs bin;
  bounds->add_option("--m", bin.m);
  bounds->add_option("--eps", bin.eps);
  bounds->add_option("--du1", bin.D_U1);
  bounds->add_option("--du2", bin.D_U2);
  bounds->add_option("--lambda", bin.lambda);
  bounds->add_option("--v1", bin.V1);
  bounds->add_option("--v2", bin.V2);
  bounds->add_option("--a1", bin.A1);
  bounds->add_option("--a2", bin.A2);
  bounds->add_option("--x1", bin.X1);
  bounds->add_option("--x2", bin.X2);
  bounds->add_option("--h1", bin.H1);
  bounds->add_option("--h2", bin.H2);
  std::string bfamily, btrace;
  int bi = 16, bj = 6;
  bounds->add_option("--from-family", bfamily, "derive the inputs from a gallery family");
  bounds->add_option("--i", bi);
  bounds->add_option("--j", bj);
  bounds->add_option("--trace", btrace, "write the flat-convergence CSV here");

  // distance
  auto* dist = app.add_subcommand("distance", "geodesic distance on a profile file");
  std::string dprofile;
  double dr1 = 0, dr2 = 0, ddphi = 0;
  bool drefine = false;
  dist->add_option("--profile", dprofile)->required();
  dist->add_option("--r1", dr1)->required();
  dist->add_option("--r2", dr2)->required();
  dist->add_option("--dphi", ddphi)->required();
  dist->add_flag("--refine", drefine, "Clairaut shooting refinement");

  // check
  auto* check = app.add_subcommand("check", "hypothesis tables and verdicts for a family");
  std::string cfamily;
  check->add_option("family", cfamily)->required();
  int cimax = 0, cjmax = 0, ckmax = 0;
  check->add_option("--imax", cimax);
  check->add_option("--jmax", cjmax);
  check->add_option("--kmax", ckmax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (gallery->parsed()) {
      if (glist->parsed()) return cmd_gallery_list();
      if (grun->parsed()) {
        if (grun_imax > 0) cfg.i_max = grun_imax;
        if (grun_jmax > 0) cfg.j_max = grun_jmax;
        if (grun_kmax > 0) cfg.k_max = std::max(grun_kmax, cfg.j_max);
        return cmd_gallery_run(grun_name, cfg, grun_iprobe, grun_out);
      }
      std::cerr << "gallery needs 'list' or 'run'\n";
      return 2;
    }
    if (bounds->parsed()) {
      if (!btrace.empty()) {
        if (bfamily.empty()) {
          std::cerr << "--trace requires --from-family\n";
          return 2;
        }
        return cmd_trace(bfamily, btrace, cfg);
      }
      return cmd_bounds(bwhich, bin, !bfamily.empty(), bfamily, bi, bj, btrace, cfg);
    }
    if (dist->parsed()) return cmd_distance(dprofile, dr1, dr2, ddphi, drefine, cfg);
    if (check->parsed()) {
      if (cimax > 0) cfg.i_max = cimax;
      if (cjmax > 0) cfg.j_max = cjmax;
      if (ckmax > 0) cfg.k_max = std::max(ckmax, cfg.j_max);
      return cmd_check(cfamily, cfg);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
