#include "cdmapower_cli/figures.hpp"

namespace cdmapower::cli {
namespace {

std::string tag(double v) {
  std::string s = format_double(v);
  for (auto& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

FigureCurve curve(const ScenarioConfig& base, int as, double theta, double alpha,
                  double sigma, double cst, double sht) {
  FigureCurve c;
  c.cfg = base;
  c.cfg.policy.as_size = as;
  c.cfg.policy.cst_db = cst;
  c.cfg.policy.sht_db = sht;
  c.cfg.theta_deg = theta;
  c.cfg.env.alpha = alpha;
  c.cfg.env.sigma_db = sigma;
  c.name = "as" + std::to_string(as) + "_a" + tag(alpha) + "_s" + tag(sigma) + "_cst" +
           tag(cst);
  if (as > 1) c.name += "_sht" + tag(sht);
  c.cfg.label = c.name;
  return c;
}

}  // namespace

std::vector<double> default_figure_grid() {
  std::vector<double> g;
  for (int i = 2; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

FigureFamily figure_family(int id, const ScenarioConfig& base) {
  FigureFamily f;
  f.id = id;
  f.plots_std = id % 2 == 0;
  const double alphas[] = {3.0, 4.0};
  const double sigmas[] = {8.0, 10.0};
  switch (id) {
    case 3:
    case 4:
      for (double a : alphas) {
        for (double s : sigmas) {
          for (double cst : {1.0, 3.0}) f.curves.push_back(curve(base, 1, 15.0, a, s, cst, 0.0));
        }
      }
      break;
    case 5:
    case 6:
      for (int as : {1, 2}) {
        for (double a : alphas) {
          for (double s : sigmas) f.curves.push_back(curve(base, as, 30.0, a, s, 1.0, 3.0));
        }
      }
      break;
    case 7:
    case 8:
      for (double a : alphas) {
        for (double s : sigmas) {
          f.curves.push_back(curve(base, 1, 0.0, a, s, 1.0, 0.0));
          for (double sht : {1.0, 3.0}) f.curves.push_back(curve(base, 3, 0.0, a, s, 1.0, sht));
        }
      }
      break;
    default:
      throw InvalidParameterError("unknown figure id " + std::to_string(id) +
                                  " (expected 3..8)");
  }
  const std::vector<double> grid = base.r_explicit ? base.r_over_rmax : default_figure_grid();
  for (auto& c : f.curves) {
    c.cfg.r_over_rmax = grid;
    c.cfg.run_theory = true;
    c.cfg.run_mc = false;
    c.cfg.validate();
  }
  return f;
}

}  // namespace cdmapower::cli
