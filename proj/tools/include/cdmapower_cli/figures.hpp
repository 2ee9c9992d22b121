#pragma once

#include <string>
#include <vector>

#include "cdmapower_cli/config.hpp"

namespace cdmapower::cli {

// One curve of a figure: a scenario swept over r / r_max.
struct FigureCurve {
  std::string name;  // file-name friendly, e.g. "as1_a3_s8_cst1"
  ScenarioConfig cfg;
};

struct FigureFamily {
  int id = 3;
  bool plots_std = false;  // sigma_beta (even ids) instead of beta mean
  std::vector<FigureCurve> curves;
};

// Nine points 0.2, 0.3, ..., 1.0.
std::vector<double> default_figure_grid();

// Curve parameters per figure. The captions only fix AS and theta, so the
// alpha / sigma / cst / sht combinations are reconstructed from the text:
//   3, 4: AS=1, theta=15, alpha {3,4} x sigma {8,10} x cst {1,3}
//   5, 6: theta=30, AS {1,2}, alpha {3,4} x sigma {8,10}, cst=1, sht=3
//   7, 8: theta=0, AS=3 with sht {1,3} plus AS=1 reference, alpha {3,4} x
//         sigma {8,10}, cst=1
// Service, quadrature and b come from `base`; the r grid too when it was
// given explicitly, else default_figure_grid(). Throws InvalidParameterError
// for an unknown id.
FigureFamily figure_family(int id, const ScenarioConfig& base);

}  // namespace cdmapower::cli
