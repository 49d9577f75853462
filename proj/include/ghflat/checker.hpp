#pragma once

#include <map>
#include <string>
#include <vector>

#include "ghflat/gallery.hpp"
#include "ghflat/geodesic.hpp"

namespace ghflat {

enum class CodimClass { point, codim_ge_2, codim_1, none };

// Structural classification of a singular-set descriptor string.
CodimClass codim_flag(const std::string& descriptor);
std::string codim_name(CodimClass c);

enum class Verdict { pass, fail, inconclusive };
std::string verdict_name(Verdict v);

struct CheckWindow {
  std::vector<int> i_list;
  std::vector<int> j_list;
  std::vector<int> k_list;  // k values for lambda tables (k >= j used)
  int grid_nr = 160;
  int grid_nphi = 160;
  int curvature_samples = 96;
  int threads = 0;
};

CheckWindow default_window(int i_max, int j_max, int k_max);

struct HypothesisReport {
  std::string family;
  CheckWindow window;

  // Tables keyed (i, j) or (i, j, k) in list order; NaN marks invalid cells.
  std::vector<std::vector<double>> diam;          // diam_{M_i}(W_j)
  std::vector<std::vector<double>> boundary_area; // Vol_{g_i}(dW_j)
  std::vector<std::vector<double>> excess_volume; // Vol_{g_i}(M \ W_j)
  std::vector<std::vector<std::vector<double>>> lambda;  // [i][j][k]
  std::vector<double> min_ricci;                  // per i
  std::vector<std::vector<double>> sup_gap_f;     // sup_Wj |f_i - f_inf|
  std::vector<std::vector<double>> sup_gap_h;

  CodimClass codim = CodimClass::none;
  bool exhaustion_connected = true;

  std::map<std::string, Verdict> verdicts;        // m-diam, m-area, m-edge-volume,
                                                  // well-embedded, ricci-lower-bound,
                                                  // smooth-convergence, connectedness
  std::map<std::string, std::string> witnesses;   // cells each verdict cites
  std::vector<std::string> routes;                // theorems with all checked hypotheses passing
  std::string unverified = "contractibility";     // never tested numerically

  double lambda_noise_floor = 0.0;
};

HypothesisReport check_family(const std::string& family, const CheckWindow& window);

struct RicciRow {
  int i = 0;
  double min_ricci = 0.0;
  double min_sectional = 0.0;
  bool includes_blend_window = false;
  bool pass = false;  // min Ricci >= (m-1) H
};

std::vector<RicciRow> check_ricci(const std::string& family, const std::vector<int>& i_list,
                                  double H, int samples = 128);

// JSON emission (deterministic: sorted keys, fixed float formatting).
std::string report_to_json(const HypothesisReport& report);

}  // namespace ghflat
