#include "cdmapower_cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cdmapower_cli/config.hpp"
#include "cdmapower_cli/figures.hpp"
#include "cdmapower_cli/report.hpp"

namespace cdmapower::cli {
namespace {

struct Overrides {
  std::string config;
  std::string output = "-";
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_nodes;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Overrides& o, bool mc_flags) {
  cmd->add_option("--output", o.output, "Output file, or - for standard output");
  cmd->add_option("--quad-nodes", o.quad_nodes, "Gauss-Legendre nodes per dimension");
  cmd->add_option("--threads", o.threads, "Worker threads for sweep points (0 = all cores)");
  if (mc_flags) {
    cmd->add_option("--samples", o.samples, "Monte-Carlo samples per round");
    cmd->add_option("--rounds", o.rounds, "Monte-Carlo rounds");
    cmd->add_option("--seed", o.seed, "Monte-Carlo master seed");
  }
}

ScenarioConfig resolve(const Overrides& o, bool require_config) {
  ScenarioConfig c;
  if (!o.config.empty()) {
    c = load_config(o.config);
  } else if (require_config) {
    throw ConfigError("--config", "required");
  }
  if (o.samples) c.mc.samples_per_round = *o.samples;
  if (o.rounds) c.mc.rounds = *o.rounds;
  if (o.seed) c.mc.master_seed = *o.seed;
  if (o.quad_nodes) c.quad.nodes_per_dim = *o.quad_nodes;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

// Runs fn with a stream bound to --output.
template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  fn(file);
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

int cmd_compute(const Overrides& o, bool mc, bool no_theory, bool timing,
                const std::string& format, bool print_config, std::ostream& out) {
  ScenarioConfig c = resolve(o, true);
  if (mc) c.run_mc = true;
  if (no_theory) c.run_theory = false;
  c.validate();
  if (print_config) {
    with_output(o.output, out, [&](std::ostream& s) { s << serialize_config(c); });
    return kExitOk;
  }
  const auto rows = run_sweep(c);
  with_output(o.output, out, [&](std::ostream& s) {
    if (format == "json") {
      write_json(s, rows, timing);
    } else {
      write_csv(s, rows, timing);
    }
  });
  return kExitOk;
}

int cmd_compare(const Overrides& o, bool gate, double rel_allowance, std::ostream& out,
                std::ostream& err) {
  ScenarioConfig c = resolve(o, true);
  c.run_theory = true;
  c.run_mc = true;
  const auto rows = run_sweep(c);
  int failures = 0;
  with_output(o.output, out, [&](std::ostream& s) {
    s << compare_header() << '\n';
    for (const auto& row : rows) {
      const Comparison cmp = compare_row(row, rel_allowance);
      if (!cmp.pass) ++failures;
      s << compare_line(row, cmp) << '\n';
    }
  });
  if (failures > 0) {
    err << failures << " of " << rows.size() << " points outside 3 standard errors\n";
  }
  return gate && failures > 0 ? kExitGateFailed : kExitOk;
}

int cmd_figure(const Overrides& o, int id, std::ostream& out) {
  const ScenarioConfig base = resolve(o, false);
  const FigureFamily fam = figure_family(id, base);

  // flatten curves x points so one pool serves the whole figure
  std::vector<std::pair<std::size_t, double>> jobs;
  for (std::size_t k = 0; k < fam.curves.size(); ++k) {
    for (double r : fam.curves[k].cfg.r_over_rmax) jobs.emplace_back(k, r);
  }
  const auto rows = ordered_pool<OutputRow>(jobs.size(), base.threads, [&](std::size_t i) {
    return evaluate_point(fam.curves[jobs[i].first].cfg, jobs[i].second);
  });

  std::vector<std::string> blocks(fam.curves.size());
  for (std::size_t k = 0; k < fam.curves.size(); ++k) blocks[k] = "r_over_rmax,value\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const OutputRow& row = rows[i];
    std::string value;
    if (row.status == "ok") {
      value = format_double(fam.plots_std ? row.theory->beta_std : row.theory->beta_mean);
    }
    blocks[jobs[i].first] += format_double(row.r_over_rmax) + "," + value + "\n";
  }

  const std::string prefix = "fig" + std::to_string(id) + "_";
  if (o.output.empty() || o.output == "-") {
    for (std::size_t k = 0; k < fam.curves.size(); ++k) {
      out << "# curve " << prefix << fam.curves[k].name << '\n' << blocks[k];
    }
    return kExitOk;
  }
  std::filesystem::create_directories(o.output);
  for (std::size_t k = 0; k < fam.curves.size(); ++k) {
    const auto path = std::filesystem::path(o.output) / (prefix + fam.curves[k].name + ".csv");
    with_output(path.string(), out, [&](std::ostream& s) { s << blocks[k]; });
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Downlink power-fraction statistics for a 19-cell CDMA layout"};
  app.require_subcommand(1);

  Overrides compute_o;
  bool mc = false;
  bool no_theory = false;
  bool timing = false;
  bool print_config = false;
  std::string format = "csv";
  auto* compute = app.add_subcommand("compute", "Theory (and optionally Monte-Carlo) per sweep point");
  compute->add_option("--config", compute_o.config, "Scenario config file")->required();
  add_common(compute, compute_o, true);
  compute->add_flag("--mc", mc, "Also run the Monte-Carlo estimator");
  compute->add_flag("--no-theory", no_theory, "Skip the semi-analytic model");
  compute->add_flag("--timing", timing, "Append a runtime_s column (not bit-stable)");
  compute->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  compute->add_flag("--print-config", print_config, "Print the effective config and exit");

  Overrides compare_o;
  bool gate = false;
  double rel_allowance = 0.0;
  auto* compare = app.add_subcommand("compare", "Theory vs Monte-Carlo per sweep point");
  compare->add_option("--config", compare_o.config, "Scenario config file")->required();
  add_common(compare, compare_o, true);
  compare->add_flag("--gate", gate, "Exit with status 2 if any point fails");
  compare->add_option("--rel-allowance", rel_allowance,
                      "Also pass points whose relative gap is at most this");

  Overrides figure_o;
  int figure_id = 0;
  auto* figure = app.add_subcommand("figure", "Curve data for figures 3-8");
  figure->add_option("--figure", figure_id, "Figure id, 3..8")->required();
  figure->add_option("--config", figure_o.config, "Base config (service, quadrature, r grid)");
  add_common(figure, figure_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(compute_o, mc, no_theory, timing, format, print_config, out);
    if (*compare) return cmd_compare(compare_o, gate, rel_allowance, out, err);
    if (*figure) return cmd_figure(figure_o, figure_id, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameterError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cdmapower::cli
