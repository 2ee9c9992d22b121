#include "cdmapower_cli/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cdmapower/moments.hpp"

namespace cdmapower::cli {
namespace {

std::string num(double v) { return format_double(v); }

void join(std::ostringstream& out, std::initializer_list<std::string> cells) {
  for (const auto& c : cells) out << ',' << c;
}

}  // namespace

OutputRow evaluate_point(const ScenarioConfig& cfg, double r) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputRow row;
  row.label = cfg.label;
  row.r_over_rmax = r;
  row.scenario = cfg.at(r);

  if (cfg.run_theory) {
    MomentOptions opt;
    opt.quad = cfg.quad;
    opt.partner_gain_floor = cfg.partner_gain_floor;
    opt.threads = 1;
    TheoryColumns t;
    try {
      const MomentReport rep = compute_moments(row.scenario, opt);
      t.beta_mean = rep.beta_mean * cfg.ct_scale_theory;
      t.beta_std = rep.beta_std * cfg.ct_scale_theory;
      t.within_std = rep.pooled_within_std * cfg.ct_scale_theory;
      t.p_camp = rep.camping_probability;
      t.p_hho = rep.probability_of(ModeKind::kHho);
      t.p_sho2 = rep.probability_of(ModeKind::kSho2);
      t.p_sho3 = rep.probability_of(ModeKind::kSho3);
      t.strained_subsets = rep.strained_subsets;
    } catch (const NoCoverageError&) {
      row.status = "no_coverage";
    }
    row.theory = t;
  }
  if (cfg.run_mc) {
    McConfig mc = cfg.mc;
    mc.threads = 1;
    const McEstimate e = run(row.scenario, mc);
    McColumns m;
    m.beta_mean = e.beta_mean;
    m.beta_std = e.beta_std;
    m.beta_mean_se = e.beta_mean_se;
    m.beta_std_se = e.beta_std_se;
    m.p_camp = e.camping_frequency();
    m.p_hho = e.frequency(ModeKind::kHho);
    m.p_sho2 = e.frequency(ModeKind::kSho2);
    m.p_sho3 = e.frequency(ModeKind::kSho3);
    m.harmonic_violations = e.harmonic_violations;
    row.mc = m;
  }
  row.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::vector<OutputRow> run_sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  return ordered_pool<OutputRow>(cfg.r_over_rmax.size(), cfg.threads, [&](std::size_t i) {
    return evaluate_point(cfg, cfg.r_over_rmax[i]);
  });
}

std::string csv_header(bool timing) {
  std::string h =
      "schema_version,label,as_size,alpha,sigma_dB,b_corr,cst_dB,sht_dB,theta_deg,"
      "r_over_rmax,r1,status,"
      "p_camp_theory,p_hho_theory,p_sho2_theory,p_sho3_theory,"
      "beta_mean_theory,beta_std_theory,beta_within_std_theory,taylor_strained,"
      "beta_mean_mc,beta_std_mc,beta_mean_se_mc,beta_std_se_mc,"
      "p_camp_mc,p_hho_mc,p_sho2_mc,p_sho3_mc";
  if (timing) h += ",runtime_s";
  return h;
}

std::string csv_row(const OutputRow& row, bool timing) {
  const ScenarioParams& s = row.scenario;
  std::ostringstream out;
  out << kSchemaVersion;
  join(out, {row.label, std::to_string(s.policy.as_size), num(s.env.alpha),
             num(s.env.sigma_db), num(s.env.b_corr), num(s.policy.cst_db),
             num(s.policy.sht_db), num(s.theta_deg), num(row.r_over_rmax), num(s.r1),
             row.status});
  if (row.theory) {
    const auto& t = *row.theory;
    join(out, {num(t.p_camp), num(t.p_hho), num(t.p_sho2), num(t.p_sho3)});
    if (row.status == "ok") {
      join(out, {num(t.beta_mean), num(t.beta_std), num(t.within_std),
                 std::to_string(t.strained_subsets)});
    } else {
      out << ",,,,";
    }
  } else {
    out << ",,,,,,,,";
  }
  if (row.mc && row.mc->p_camp > 0.0) {
    const auto& m = *row.mc;
    join(out, {num(m.beta_mean), num(m.beta_std), num(m.beta_mean_se), num(m.beta_std_se),
               num(m.p_camp), num(m.p_hho), num(m.p_sho2), num(m.p_sho3)});
  } else if (row.mc) {
    out << ",,,,," << num(row.mc->p_camp) << ",,,";
  } else {
    out << ",,,,,,,,";
  }
  if (timing) out << ',' << num(row.runtime_s);
  return out.str();
}

void write_csv(std::ostream& out, const std::vector<OutputRow>& rows, bool timing) {
  out << csv_header(timing) << '\n';
  for (const auto& r : rows) out << csv_row(r, timing) << '\n';
}

void write_json(std::ostream& out, const std::vector<OutputRow>& rows, bool timing) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["label"] = r.label;
    j["as_size"] = r.scenario.policy.as_size;
    j["alpha"] = r.scenario.env.alpha;
    j["sigma_dB"] = r.scenario.env.sigma_db;
    j["b_corr"] = r.scenario.env.b_corr;
    j["cst_dB"] = r.scenario.policy.cst_db;
    j["sht_dB"] = r.scenario.policy.sht_db;
    j["theta_deg"] = r.scenario.theta_deg;
    j["r_over_rmax"] = r.r_over_rmax;
    j["r1"] = r.scenario.r1;
    j["status"] = r.status;
    if (r.theory) {
      const auto& t = *r.theory;
      auto& o = j["theory"];
      o["p_camp"] = t.p_camp;
      o["p_hho"] = t.p_hho;
      o["p_sho2"] = t.p_sho2;
      o["p_sho3"] = t.p_sho3;
      if (r.status == "ok") {
        o["beta_mean"] = t.beta_mean;
        o["beta_std"] = t.beta_std;
        o["beta_within_std"] = t.within_std;
        o["taylor_strained"] = t.strained_subsets;
      }
    }
    if (r.mc) {
      const auto& m = *r.mc;
      auto& o = j["mc"];
      o["p_camp"] = m.p_camp;
      if (m.p_camp > 0.0) {
        o["beta_mean"] = m.beta_mean;
        o["beta_std"] = m.beta_std;
        o["beta_mean_se"] = m.beta_mean_se;
        o["beta_std_se"] = m.beta_std_se;
        o["p_hho"] = m.p_hho;
        o["p_sho2"] = m.p_sho2;
        o["p_sho3"] = m.p_sho3;
      }
    }
    if (timing) j["runtime_s"] = r.runtime_s;
    arr.push_back(j);
  }
  out << arr.dump(2) << '\n';
}

Comparison compare_row(const OutputRow& row, double rel_allowance) {
  Comparison c;
  c.r_over_rmax = row.r_over_rmax;
  if (!row.theory || !row.mc || row.status != "ok" || !(row.mc->p_camp > 0.0)) {
    // both sides agreeing that the MS cannot camp here is a match
    c.pass = row.theory && row.mc && row.status == "no_coverage" && row.mc->p_camp == 0.0;
    return c;
  }
  const auto& t = *row.theory;
  const auto& m = *row.mc;
  c.delta = t.beta_mean - m.beta_mean;
  c.se = m.beta_mean_se;
  c.se_units = c.se > 0.0 ? std::abs(c.delta) / c.se : (c.delta == 0.0 ? 0.0 : INFINITY);
  c.rel_gap = m.beta_mean != 0.0 ? std::abs(c.delta) / std::abs(m.beta_mean) : 0.0;
  c.std_delta = t.beta_std - m.beta_std;
  c.std_se_units = m.beta_std_se > 0.0 ? std::abs(c.std_delta) / m.beta_std_se : 0.0;
  c.pass = c.se_units <= 3.0 || c.rel_gap <= rel_allowance;
  return c;
}

std::string compare_header() {
  return "schema_version,label,r_over_rmax,beta_mean_theory,beta_mean_mc,delta,se,se_units,"
         "rel_gap,beta_std_theory,beta_std_mc,std_delta,std_se_units,p_camp_theory,p_camp_mc,"
         "pass";
}

std::string compare_line(const OutputRow& row, const Comparison& c) {
  std::ostringstream out;
  out << kSchemaVersion;
  const bool ok = row.theory && row.mc && row.status == "ok" && row.mc->p_camp > 0.0;
  join(out, {row.label, num(row.r_over_rmax)});
  if (ok) {
    join(out, {num(row.theory->beta_mean), num(row.mc->beta_mean), num(c.delta), num(c.se),
               num(c.se_units), num(c.rel_gap), num(row.theory->beta_std),
               num(row.mc->beta_std), num(c.std_delta), num(c.std_se_units),
               num(row.theory->p_camp), num(row.mc->p_camp)});
  } else {
    out << ",,,,,,,,,,,,";
  }
  out << ',' << (c.pass ? "pass" : "FAIL");
  return out.str();
}

}  // namespace cdmapower::cli
