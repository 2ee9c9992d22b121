#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cdmapower/radio_model.hpp"
#include "cdmapower/regions.hpp"
#include "cdmapower/terms.hpp"

namespace cdmapower {

// Round r draws from std::mt19937_64 seeded with round_seed(master_seed, r);
// Gaussians come from std::normal_distribution.
struct McConfig {
  std::size_t samples_per_round = 100000;
  std::size_t rounds = 5;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;  // rounds run in parallel; 0 = hardware concurrency

  void validate() const;
};

// splitmix64 finalizer applied to the master seed mixed with the round index.
std::uint64_t round_seed(std::uint64_t master_seed, std::size_t round);

// i.i.d. N(0, sigma^2) shadowing vectors from one substream.
class ShadowSampler {
 public:
  ShadowSampler(std::uint64_t seed, double sigma) : rng_(seed), normal_(0.0, sigma) {}
  void next(ShadowVector& xi) {
    for (auto& v : xi) v = normal_(rng_);
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

struct ModeCounts {
  std::uint64_t hho = 0;
  std::array<std::uint64_t, kNumCells> sho2{};  // by partner k
  std::array<std::array<std::uint64_t, kNumCells>, kNumCells> sho3{};  // by (k, l)
  std::uint64_t not_camped = 0;

  void add(const ConnectionMode& mode);
  void merge(const ModeCounts& other);
  std::uint64_t of(const ConnectionMode& mode) const;
  std::uint64_t of_kind(ModeKind kind) const;
  std::uint64_t total() const;
};

struct McRound {
  double beta_mean = 0.0;
  double beta_std = 0.0;
  std::uint64_t camped = 0;
};

struct McEstimate {
  // Pooled over all camped samples of all rounds.
  double beta_mean = 0.0;
  double beta_std = 0.0;
  // Standard errors of beta_mean: pooled i.i.d. estimate and the spread of
  // the round means. beta_mean_se is the within-round one.
  double beta_mean_se = 0.0;
  double beta_mean_se_between = 0.0;
  double beta_std_se = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t camped = 0;
  // SHO samples whose per-BS cost exceeded a participant's HHO cost.
  std::uint64_t harmonic_violations = 0;
  ModeCounts counts;
  std::vector<McRound> rounds;

  double frequency(const ConnectionMode& mode) const;
  double frequency(ModeKind kind) const;
  double camping_frequency() const;
  // Binomial standard error of a frequency at this sample size.
  double frequency_se(double p) const;
};

McEstimate run(const ScenarioParams& p, const McConfig& cfg);

struct TermEstimate {
  double value = 0.0;
  double se = 0.0;
  std::uint64_t count = 0;
};

// E[a] or E[a b] over the samples classified into `mode`. Throws
// InsufficientSamplesError when fewer than kMinConditionalSamples land there.
inline constexpr std::uint64_t kMinConditionalSamples = 500;
TermEstimate conditional_term_estimate(const ScenarioParams& p, const McConfig& cfg,
                                       const ConnectionMode& mode, const TermId& a,
                                       const std::optional<TermId>& b = std::nullopt);

}  // namespace cdmapower
