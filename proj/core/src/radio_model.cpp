#include "cdmapower/radio_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cdmapower/errors.hpp"

namespace cdmapower {

PropagationEnv PropagationEnv::make(double alpha, double sigma_db, double b_corr) {
  PropagationEnv env;
  env.alpha = alpha;
  env.sigma_db = sigma_db;
  env.b_corr = b_corr;
  env.a_corr = (b_corr > 0.0 && b_corr <= 1.0) ? std::sqrt(1.0 - b_corr * b_corr) : 0.0;
  env.validate();
  return env;
}

void PropagationEnv::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidParameterError("alpha must be positive");
  }
  if (!(sigma_db > 0.0) || !std::isfinite(sigma_db)) {
    throw InvalidParameterError("sigma_db must be positive");
  }
  if (!(b_corr > 0.0 && b_corr <= 1.0)) {
    throw InvalidParameterError("b_corr must lie in (0, 1]");
  }
  if (!(a_corr >= 0.0) || std::abs(a_corr * a_corr + b_corr * b_corr - 1.0) > 1e-12) {
    throw InvalidParameterError("a_corr^2 + b_corr^2 must equal 1");
  }
}

void ServiceProfile::validate() const {
  if (!(activity > 0.0 && activity <= 1.0)) {
    throw InvalidParameterError("activity factor must lie in (0, 1]");
  }
  if (!(bit_rate > 0.0) || !std::isfinite(bit_rate)) {
    throw InvalidParameterError("bit_rate must be positive");
  }
  if (!(chip_rate > 0.0) || !std::isfinite(chip_rate)) {
    throw InvalidParameterError("chip_rate must be positive");
  }
  if (!std::isfinite(ebio_target_db)) {
    throw InvalidParameterError("ebio_target_db must be finite");
  }
  if (!(orthogonality >= 0.0 && orthogonality <= 1.0)) {
    throw InvalidParameterError("orthogonality must lie in [0, 1]");
  }
  const double ct = load_constant(*this);
  if (!(ct > 0.0) || !std::isfinite(ct)) {
    throw InvalidParameterError("load constant C_t must be finite and positive");
  }
}

void HandoffPolicy::validate() const {
  if (as_size < 1 || as_size > 3) {
    throw InvalidParameterError("as_size must be 1, 2 or 3");
  }
  if (!(cst_db >= 0.0) || !std::isfinite(cst_db)) {
    throw InvalidParameterError("cst_db must be non-negative");
  }
  if (!(sht_db >= 0.0) || !std::isfinite(sht_db)) {
    throw InvalidParameterError("sht_db must be non-negative");
  }
}

ScenarioParams ScenarioParams::at_normalized(const PropagationEnv& env,
                                             const ServiceProfile& service,
                                             const HandoffPolicy& policy,
                                             double theta_deg, double r_over_rmax,
                                             double cell_radius) {
  ScenarioParams p;
  p.env = env;
  p.service = service;
  p.policy = policy;
  p.cell_radius = cell_radius;
  p.theta_deg = theta_deg;
  p.r1 = r_over_rmax * r_max(theta_deg, cell_radius);
  return p;
}

double ScenarioParams::r_over_rmax() const { return r1 / r_max(theta_deg, cell_radius); }

void ScenarioParams::validate() const {
  env.validate();
  service.validate();
  policy.validate();
  if (!(cell_radius > 0.0) || !std::isfinite(cell_radius)) {
    throw InvalidParameterError("cell_radius must be positive");
  }
  if (!(r1 >= 0.0) || !std::isfinite(r1)) throw InvalidParameterError("r1 must be >= 0");
  if (!std::isfinite(theta_deg)) throw InvalidParameterError("theta_deg must be finite");
}

MsView ScenarioParams::view() const {
  return ms_view(build_layout(cell_radius), r1, theta_deg);
}

double load_constant(const ServiceProfile& s) {
  return s.activity * s.bit_rate * std::pow(10.0, s.ebio_target_db / 10.0) / s.chip_rate;
}

double interference_sum(const MsView& view, const PropagationEnv& env, double u,
                        CellIndex serving, const ShadowVector& xi) {
  double sum = 1.0 - u;
  for (CellIndex i = 0; i < kNumCells; ++i) {
    if (i == serving) continue;
    const double c = gain_ratio(view, serving, i, env.alpha);
    if (c == 0.0) continue;
    sum += c * std::pow(10.0, env.b_corr * (xi[i] - xi[serving]) / 10.0);
  }
  return sum;
}

double beta_hho(double ct, double x) {
  if (!(x > 0.0)) throw InvalidStateError("interference sum must be positive");
  return ct * x;
}

double beta_sho2(double ct, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw InvalidStateError("interference sums must be positive");
  }
  return ct * x * y / (x + y);
}

double beta_sho3(double ct, double x, double y, double z) {
  if (!(x > 0.0) || !(y > 0.0) || !(z > 0.0)) {
    throw InvalidStateError("interference sums must be positive");
  }
  return ct * x * y * z / (x * y + x * z + y * z);
}

InterferenceTable::InterferenceTable(const MsView& view, const PropagationEnv& env,
                                     double u)
    : b_(env.b_corr), intra_(1.0 - u) {
  for (CellIndex i = 0; i < kNumCells; ++i) {
    const double r = view.r[i];
    if (r == 0.0 && i != kServingCell) {
      throw DegeneratePositionError("MS co-located with base station " +
                                    std::to_string(i + 1));
    }
    path_gain_[i] = r == 0.0 ? std::numeric_limits<double>::infinity()
                             : std::pow(r, -env.alpha);
  }
}

void InterferenceTable::received_levels(const ShadowVector& xi,
                                        std::array<double, kNumCells>& out) const {
  constexpr double kLn10Over10 = 0.23025850929940458;
  for (CellIndex i = 0; i < kNumCells; ++i) {
    out[i] = path_gain_[i] * std::exp(kLn10Over10 * b_ * xi[i]);
  }
}

double InterferenceTable::sum_from_levels(const std::array<double, kNumCells>& levels,
                                          CellIndex serving) const {
  const double own = levels[serving];
  double other = 0.0;
  for (CellIndex i = 0; i < kNumCells; ++i) {
    if (i != serving) other += levels[i];
  }
  // own == inf only for the co-sited serving cell: no inter-cell term.
  return std::isinf(own) ? intra_ : intra_ + other / own;
}

}  // namespace cdmapower
