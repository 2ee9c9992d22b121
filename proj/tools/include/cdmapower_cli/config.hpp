#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cdmapower/errors.hpp"
#include "cdmapower/montecarlo.hpp"
#include "cdmapower/quadrature.hpp"
#include "cdmapower/radio_model.hpp"

namespace cdmapower::cli {

// Field-level configuration error; what() starts with the offending key.
class ConfigError : public InvalidParameterError {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : InvalidParameterError(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ScenarioConfig {
  std::string label = "scenario";
  PropagationEnv env;
  ServiceProfile service;
  HandoffPolicy policy;
  double theta_deg = 0.0;
  double cell_radius = 1.0;
  std::vector<double> r_over_rmax{1.0};
  bool r_explicit = false;  // r_over_rmax given in the file

  QuadratureSpec quad;
  McConfig mc;
  bool run_theory = true;
  bool run_mc = false;
  double partner_gain_floor = 1e-6;
  // Multiplies C_t on the theory side only. A sensitivity knob for the
  // comparison gate; 1 for every real run.
  double ct_scale_theory = 1.0;
  unsigned threads = 1;

  ScenarioParams at(double r_over_rmax) const;
  // Throws ConfigError naming the first invalid field.
  void validate() const;
};

enum class ConfigFormat { kAuto, kKeyValue, kJson };

// Flat "key = value" lines (# comments) or a JSON object with the same keys.
// Unknown keys are rejected.
ScenarioConfig parse_config(std::string_view text, ConfigFormat format = ConfigFormat::kAuto);
ScenarioConfig load_config(const std::string& path);

// Effective config as key = value text; parse_config(serialize_config(c))
// reproduces c exactly.
std::string serialize_config(const ScenarioConfig& c);

// Documented keys in file order.
const std::vector<std::string>& config_keys();

// Shortest decimal string that round-trips the double.
std::string format_double(double v);

}  // namespace cdmapower::cli
