#include "cdmapower_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cdmapower::cli {
namespace {

using Json = nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a number, got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key, "expected true/false, got '" + t + "'");
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

// Raw values keyed by name, all as text. JSON is flattened into the same
// representation so both containers share one validation path.
using RawMap = std::map<std::string, std::string>;

RawMap read_key_value(std::string_view text) {
  RawMap raw;
  std::stringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    if (raw.count(key)) throw ConfigError(key, "duplicate key");
    raw[key] = trim(t.substr(eq + 1));
  }
  return raw;
}

RawMap read_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("json", e.what());
  }
  if (!j.is_object()) throw ConfigError("json", "top level must be an object");
  RawMap raw;
  for (const auto& [key, v] : j.items()) {
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(key, "list entries must be numbers");
        joined += (joined.empty() ? "" : ",") + format_double(x.get<double>());
      }
      raw[key] = joined;
    } else if (v.is_string()) {
      raw[key] = v.get<std::string>();
    } else if (v.is_boolean()) {
      raw[key] = v.get<bool>() ? "true" : "false";
    } else if (v.is_number_unsigned() || v.is_number_integer()) {
      raw[key] = v.dump();
    } else if (v.is_number()) {
      raw[key] = format_double(v.get<double>());
    } else {
      throw ConfigError(key, "unsupported value type");
    }
  }
  return raw;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "label",          "alpha",           "sigma_dB",     "b_corr",
      "nu",             "bit_rate",        "chip_rate",    "ebio_target_dB",
      "orthogonality_u", "as_size",        "cst_dB",       "sht_dB",
      "theta_deg",      "r_over_rmax",     "cell_radius",  "quad_nodes",
      "quad_truncation", "quad_rel_tol",   "mc_samples",   "mc_rounds",
      "mc_seed",        "theory",          "mc",           "partner_gain_floor",
      "ct_scale_theory", "threads"};
  return keys;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

ScenarioParams ScenarioConfig::at(double r) const {
  return ScenarioParams::at_normalized(env, service, policy, theta_deg, r, cell_radius);
}

void ScenarioConfig::validate() const {
  auto wrap = [](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  };
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be positive");
  };
  positive("alpha", env.alpha);
  positive("sigma_dB", env.sigma_db);
  if (!(env.b_corr > 0.0 && env.b_corr <= 1.0)) throw ConfigError("b_corr", "must be in (0, 1]");
  positive("nu", service.activity);
  if (service.activity > 1.0) throw ConfigError("nu", "must be at most 1");
  positive("bit_rate", service.bit_rate);
  positive("chip_rate", service.chip_rate);
  if (!std::isfinite(service.ebio_target_db)) throw ConfigError("ebio_target_dB", "must be finite");
  if (!(service.orthogonality >= 0.0 && service.orthogonality <= 1.0)) {
    throw ConfigError("orthogonality_u", "must be in [0, 1]");
  }
  if (policy.as_size < 1 || policy.as_size > 3) throw ConfigError("as_size", "must be 1, 2 or 3");
  if (!(policy.cst_db >= 0.0)) throw ConfigError("cst_dB", "must be >= 0");
  if (!(policy.sht_db >= 0.0)) throw ConfigError("sht_dB", "must be >= 0");
  if (quad.nodes_per_dim < 8) throw ConfigError("quad_nodes", "must be >= 8");
  if (!(quad.truncation_mult >= 5.0)) throw ConfigError("quad_truncation", "must be >= 5");
  if (!(quad.rel_tol > 0.0)) throw ConfigError("quad_rel_tol", "must be positive");
  if (mc.samples_per_round < 1000) throw ConfigError("mc_samples", "must be >= 1000");
  if (mc.rounds < 1) throw ConfigError("mc_rounds", "must be >= 1");
  // anything the field checks above missed
  wrap("alpha/sigma_dB/b_corr", [&] { env.validate(); });
  wrap("nu/bit_rate/chip_rate/ebio_target_dB/orthogonality_u", [&] { service.validate(); });
  wrap("as_size/cst_dB/sht_dB", [&] { policy.validate(); });
  wrap("quad_nodes/quad_truncation/quad_rel_tol", [&] { quad.validate(); });
  wrap("mc_samples/mc_rounds", [&] { mc.validate(); });
  if (!(cell_radius > 0.0)) throw ConfigError("cell_radius", "must be positive");
  if (!std::isfinite(theta_deg)) throw ConfigError("theta_deg", "must be finite");
  if (r_over_rmax.empty()) throw ConfigError("r_over_rmax", "empty sweep");
  for (double r : r_over_rmax) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ConfigError("r_over_rmax", "values must be finite and >= 0");
    }
  }
  if (!(partner_gain_floor >= 0.0)) throw ConfigError("partner_gain_floor", "must be >= 0");
  if (!(ct_scale_theory > 0.0) || !std::isfinite(ct_scale_theory)) {
    throw ConfigError("ct_scale_theory", "must be positive");
  }
  if (!run_theory && !run_mc) throw ConfigError("theory/mc", "nothing to run");
}

ScenarioConfig parse_config(std::string_view text, ConfigFormat format) {
  if (format == ConfigFormat::kAuto) {
    const std::string t = trim(text);
    format = !t.empty() && t.front() == '{' ? ConfigFormat::kJson : ConfigFormat::kKeyValue;
  }
  const RawMap raw = format == ConfigFormat::kJson ? read_json(text) : read_key_value(text);

  const auto& known = config_keys();
  for (const auto& [key, value] : raw) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(key, "unknown key");
    }
  }

  ScenarioConfig c;
  auto num = [&](const char* key, double& dst) {
    if (auto it = raw.find(key); it != raw.end()) dst = parse_number(key, it->second);
  };
  if (auto it = raw.find("label"); it != raw.end()) {
    c.label = it->second;
    if (c.label.find_first_of(",\"\n") != std::string::npos) {
      throw ConfigError("label", "must not contain commas, quotes or newlines");
    }
  }
  num("alpha", c.env.alpha);
  num("sigma_dB", c.env.sigma_db);
  if (auto it = raw.find("b_corr"); it != raw.end()) {
    c.env.b_corr = parse_number("b_corr", it->second);
    if (!(c.env.b_corr > 0.0 && c.env.b_corr <= 1.0)) {
      throw ConfigError("b_corr", "must lie in (0, 1]");
    }
    c.env.a_corr = std::sqrt(1.0 - c.env.b_corr * c.env.b_corr);
  }
  num("nu", c.service.activity);
  num("bit_rate", c.service.bit_rate);
  num("chip_rate", c.service.chip_rate);
  num("ebio_target_dB", c.service.ebio_target_db);
  num("orthogonality_u", c.service.orthogonality);
  if (auto it = raw.find("as_size"); it != raw.end()) {
    c.policy.as_size = static_cast<int>(parse_count("as_size", it->second));
  }
  num("cst_dB", c.policy.cst_db);
  num("sht_dB", c.policy.sht_db);
  num("theta_deg", c.theta_deg);
  if (auto it = raw.find("r_over_rmax"); it != raw.end()) {
    c.r_over_rmax = parse_list("r_over_rmax", it->second);
    c.r_explicit = true;
  }
  num("cell_radius", c.cell_radius);
  if (auto it = raw.find("quad_nodes"); it != raw.end()) {
    c.quad.nodes_per_dim = static_cast<int>(parse_count("quad_nodes", it->second));
  }
  num("quad_truncation", c.quad.truncation_mult);
  num("quad_rel_tol", c.quad.rel_tol);
  if (auto it = raw.find("mc_samples"); it != raw.end()) {
    c.mc.samples_per_round = parse_count("mc_samples", it->second);
  }
  if (auto it = raw.find("mc_rounds"); it != raw.end()) {
    c.mc.rounds = parse_count("mc_rounds", it->second);
  }
  if (auto it = raw.find("mc_seed"); it != raw.end()) {
    c.mc.master_seed = parse_count("mc_seed", it->second);
  }
  if (auto it = raw.find("theory"); it != raw.end()) c.run_theory = parse_bool("theory", it->second);
  if (auto it = raw.find("mc"); it != raw.end()) c.run_mc = parse_bool("mc", it->second);
  num("partner_gain_floor", c.partner_gain_floor);
  num("ct_scale_theory", c.ct_scale_theory);
  if (auto it = raw.find("threads"); it != raw.end()) {
    c.threads = static_cast<unsigned>(parse_count("threads", it->second));
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return parse_config(ss.str(), json ? ConfigFormat::kJson : ConfigFormat::kAuto);
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  auto put = [&](const char* key, const std::string& v) { out << key << " = " << v << "\n"; };
  auto num = [&](const char* key, double v) { put(key, format_double(v)); };
  put("label", c.label);
  num("alpha", c.env.alpha);
  num("sigma_dB", c.env.sigma_db);
  num("b_corr", c.env.b_corr);
  num("nu", c.service.activity);
  num("bit_rate", c.service.bit_rate);
  num("chip_rate", c.service.chip_rate);
  num("ebio_target_dB", c.service.ebio_target_db);
  num("orthogonality_u", c.service.orthogonality);
  put("as_size", std::to_string(c.policy.as_size));
  num("cst_dB", c.policy.cst_db);
  num("sht_dB", c.policy.sht_db);
  num("theta_deg", c.theta_deg);
  std::string rs;
  for (double r : c.r_over_rmax) rs += (rs.empty() ? "" : ", ") + format_double(r);
  put("r_over_rmax", rs);
  num("cell_radius", c.cell_radius);
  put("quad_nodes", std::to_string(c.quad.nodes_per_dim));
  num("quad_truncation", c.quad.truncation_mult);
  num("quad_rel_tol", c.quad.rel_tol);
  put("mc_samples", std::to_string(c.mc.samples_per_round));
  put("mc_rounds", std::to_string(c.mc.rounds));
  put("mc_seed", std::to_string(c.mc.master_seed));
  put("theory", c.run_theory ? "true" : "false");
  put("mc", c.run_mc ? "true" : "false");
  num("partner_gain_floor", c.partner_gain_floor);
  num("ct_scale_theory", c.ct_scale_theory);
  put("threads", std::to_string(c.threads));
  return out.str();
}

}  // namespace cdmapower::cli
