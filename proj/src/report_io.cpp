#include "ghflat/config.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ghflat {

using nlohmann::json;

void RunConfig::validate() const {
  if (grid_nr < 8 || grid_nphi < 8) throw std::invalid_argument("grid resolution too small");
  if (grid_stencil != "dijkstra16" && grid_stencil != "fmm8")
    throw std::invalid_argument("grid.stencil must be dijkstra16 or fmm8");
  if (quad_abs_tol <= 0 || quad_rel_tol <= 0) throw std::invalid_argument("tolerances must be > 0");
  if (i_max < 1 || j_max < 1 || k_max < j_max)
    throw std::invalid_argument("window needs i_max, j_max >= 1 and k_max >= j_max");
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  json j = json::parse(text);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("nr")) c.grid_nr = g["nr"].get<int>();
    if (g.contains("nphi")) c.grid_nphi = g["nphi"].get<int>();
    if (g.contains("stencil")) c.grid_stencil = g["stencil"].get<std::string>();
  }
  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    if (q.contains("abs_tol")) c.quad_abs_tol = q["abs_tol"].get<double>();
    if (q.contains("rel_tol")) c.quad_rel_tol = q["rel_tol"].get<double>();
  }
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (w.contains("i_max")) c.i_max = w["i_max"].get<int>();
    if (w.contains("j_max")) c.j_max = w["j_max"].get<int>();
    if (w.contains("k_max")) c.k_max = w["k_max"].get<int>();
  }
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  c.validate();
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["grid"]["nr"] = c.grid_nr;
  j["grid"]["nphi"] = c.grid_nphi;
  j["grid"]["stencil"] = c.grid_stencil;
  j["quadrature"]["abs_tol"] = c.quad_abs_tol;
  j["quadrature"]["rel_tol"] = c.quad_rel_tol;
  j["window"]["i_max"] = c.i_max;
  j["window"]["j_max"] = c.j_max;
  j["window"]["k_max"] = c.k_max;
  j["threads"] = c.threads;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

std::string bound_report_to_json(const BoundReport& r) {
  json j;
  j["a"] = r.a;
  j["h"] = r.h;
  j["hbar"] = r.hbar;
  j["d_GH_bound"] = r.d_GH;
  j["d_F_bound"] = r.d_F;
  j["d_sF_bound"] = r.d_sF;
  j["provenance"] = r.provenance;
  return j.dump(2) + "\n";
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  return static_cast<bool>(out);
}

}  // namespace ghflat
