#pragma once

#include <string>
#include <vector>

#include "ghflat/bounds.hpp"

namespace ghflat {

struct TraceOptions {
  std::vector<int> i_list;
  std::vector<int> j_list;
  int k_max = 32;
  int grid_nr = 160;
  int grid_nphi = 160;
  int threads = 0;
  bool diagonal_only = false;  // pair i_list[t] with j_list[t]
};

// Flat-distance convergence trace: per (i, j),
//   B(i,j) = (hbar_{i,j} + a_{i,j}) (2 V0 + 2 A0) + 2 V_j + F
// with a_{i,j} = 2 (D0 + lambda0) arccos((1+eps_{i,j})^{-1}) / pi,
// hbar from the subdiffeo heights, V0/A0/D0/lambda0 empirical maxima over the
// window, and F the epsilon=0 subdiffeo bound for (W_j inside W_{k_max}, g_inf).
ConvergenceTrace flat_convergence_trace(const std::string& family, const TraceOptions& opts);

}  // namespace ghflat
