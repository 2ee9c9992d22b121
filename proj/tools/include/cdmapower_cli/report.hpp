#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cdmapower_cli/config.hpp"

namespace cdmapower::cli {

inline constexpr int kSchemaVersion = 1;

struct TheoryColumns {
  double beta_mean = 0.0;
  double beta_std = 0.0;
  double within_std = 0.0;
  double p_camp = 0.0;
  double p_hho = 0.0;
  double p_sho2 = 0.0;
  double p_sho3 = 0.0;
  int strained_subsets = 0;
};

struct McColumns {
  double beta_mean = 0.0;
  double beta_std = 0.0;
  double beta_mean_se = 0.0;
  double beta_std_se = 0.0;
  double p_camp = 0.0;
  double p_hho = 0.0;
  double p_sho2 = 0.0;
  double p_sho3 = 0.0;
  std::uint64_t harmonic_violations = 0;
};

struct OutputRow {
  std::string label;
  ScenarioParams scenario;
  double r_over_rmax = 0.0;
  // "ok" or "no_coverage" (theory found P = 0; moment columns empty)
  std::string status = "ok";
  std::optional<TheoryColumns> theory;
  std::optional<McColumns> mc;
  double runtime_s = 0.0;
};

OutputRow evaluate_point(const ScenarioConfig& cfg, double r_over_rmax);

// Sweep points run on a pool of cfg.threads workers; rows come back in
// input order.
std::vector<OutputRow> run_sweep(const ScenarioConfig& cfg);

// Runs job(i) for i < count on up to `threads` workers (0 = hardware);
// results come back in input order. The first failure is rethrown.
template <class T>
std::vector<T> ordered_pool(std::size_t count, unsigned threads,
                            const std::function<T(std::size_t)>& job) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(job(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, count));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::string csv_header(bool timing);
std::string csv_row(const OutputRow& row, bool timing);
void write_csv(std::ostream& out, const std::vector<OutputRow>& rows, bool timing);
void write_json(std::ostream& out, const std::vector<OutputRow>& rows, bool timing);

// Theory vs MC comparison at one point.
struct Comparison {
  double r_over_rmax = 0.0;
  double delta = 0.0;     // theory - MC
  double se = 0.0;        // combined standard error (MC side)
  double se_units = 0.0;  // |delta| / se
  double rel_gap = 0.0;   // |delta| / MC
  double std_delta = 0.0;
  double std_se_units = 0.0;
  bool pass = false;
};

// pass when |delta| <= 3 SE, or |delta| <= rel_allowance * |MC|.
Comparison compare_row(const OutputRow& row, double rel_allowance);
std::string compare_header();
std::string compare_line(const OutputRow& row, const Comparison& c);

}  // namespace cdmapower::cli
