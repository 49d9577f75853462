#pragma once

#include <optional>
#include <string>

#include "ghflat/bounds.hpp"
#include "ghflat/checker.hpp"

namespace ghflat {

// Run configuration with documented defaults; JSON config files merge under
// explicit flags.
struct RunConfig {
  // Table machinery (diameters, lambda gaps) runs many single-source solves,
  // so its default lattice is coarser than the 512x512 single-distance
  // default in GridOptions.
  int grid_nr = 160;
  int grid_nphi = 160;
  std::string grid_stencil = "dijkstra16";  // or "fmm8"
  double quad_abs_tol = 1e-9;
  double quad_rel_tol = 1e-7;
  int i_max = 16;
  int j_max = 8;
  int k_max = 32;
  int threads = 0;
  std::string out_dir = ".";

  void validate() const;
};

RunConfig config_from_json(const std::string& json_text);
std::string config_to_json(const RunConfig& c);

std::string bound_report_to_json(const BoundReport& r);

// Deterministic file write; returns false on IO failure.
bool write_file(const std::string& path, const std::string& content);

}  // namespace ghflat
