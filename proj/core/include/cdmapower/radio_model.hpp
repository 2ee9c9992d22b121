#pragma once

#include <array>

#include "cdmapower/geometry.hpp"

namespace cdmapower {

// Log-normal shadowing split zeta_i = a*xi + b*xi_i with a^2 + b^2 = 1.
// Only b enters any computation; a is carried for validation and echo.
struct PropagationEnv {
  double alpha = 3.0;     // path-loss exponent
  double sigma_db = 8.0;  // std-dev of each xi_i
  double a_corr = 0.7071067811865476;
  double b_corr = 0.7071067811865476;

  // Builds an environment with a = sqrt(1 - b^2). Validates.
  static PropagationEnv make(double alpha, double sigma_db, double b_corr);
  // Throws InvalidParameterError when an invariant is broken.
  void validate() const;
};

struct ServiceProfile {
  double activity = 0.5;        // nu
  double bit_rate = 12200.0;    // R, bit/s
  double chip_rate = 3.84e6;    // W, chip/s
  double ebio_target_db = 4.4;  // [Eb/Io]_t
  double orthogonality = 0.9;   // u

  void validate() const;
};

struct HandoffPolicy {
  int as_size = 1;  // maximum active-set size, 1..3
  double cst_db = 1.0;
  double sht_db = 3.0;

  void validate() const;
  // Thresholds translated into the shadowing domain (divide by b).
  double cst_xi(double b_corr) const { return cst_db / b_corr; }
  double sht_xi(double b_corr) const { return sht_db / b_corr; }
};

// Everything that defines one evaluation point.
struct ScenarioParams {
  PropagationEnv env;
  ServiceProfile service;
  HandoffPolicy policy;
  double cell_radius = 1.0;
  double r1 = 0.0;  // MS distance from the serving site (absolute)
  double theta_deg = 0.0;

  // r1 = r_over_rmax * r_max(theta_deg, cell_radius)
  static ScenarioParams at_normalized(const PropagationEnv& env,
                                      const ServiceProfile& service,
                                      const HandoffPolicy& policy, double theta_deg,
                                      double r_over_rmax, double cell_radius = 1.0);
  double r_over_rmax() const;
  void validate() const;
  MsView view() const;
};

// Independent shadowing components xi_1..xi_19 (dB).
using ShadowVector = std::array<double, kNumCells>;

// C_t = nu R [Eb/Io]_t / W
double load_constant(const ServiceProfile& s);

// (1 - u) + sum_{i != j} C_{j,i} 10^{b (xi_i - xi_j) / 10}
double interference_sum(const MsView& view, const PropagationEnv& env, double u,
                        CellIndex serving, const ShadowVector& xi);

// Per-link fraction of the total BS power. Each throws InvalidStateError
// when an interference argument is not positive.
double beta_hho(double ct, double x);
double beta_sho2(double ct, double x, double y);
double beta_sho3(double ct, double x, double y, double z);

// Precomputed C_{j,i} table for repeated evaluation at one MS position.
// Equivalent to interference_sum but avoids the per-call pow().
class InterferenceTable {
 public:
  InterferenceTable(const MsView& view, const PropagationEnv& env, double u);

  // received[i] = r_i^-alpha 10^{b xi_i / 10}, up to a common factor.
  void received_levels(const ShadowVector& xi, std::array<double, kNumCells>& out) const;
  // Interference sum for `serving` from precomputed received levels.
  double sum_from_levels(const std::array<double, kNumCells>& levels,
                         CellIndex serving) const;

 private:
  std::array<double, kNumCells> path_gain_{};  // r_i^-alpha (inf when r_i == 0)
  double b_ = 0.0;
  double intra_ = 0.0;
};

}  // namespace cdmapower
