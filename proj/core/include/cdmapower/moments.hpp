#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cdmapower/quadrature.hpp"
#include "cdmapower/radio_model.hpp"
#include "cdmapower/regions.hpp"
#include "cdmapower/terms.hpp"

namespace cdmapower {

// What the term integrals need besides the region: the C_{j,i} table and
// the intra-cell floor.
struct LinkModel {
  MsView view;
  PropagationEnv env;
  double orthogonality = 0.9;  // u
  double ct = 0.0;             // C_t

  static LinkModel from(const ScenarioParams& p);
};

// Per-component breakdown of the interference-sum statistics, unnormalized
// (integrals over the subset, not yet divided by its probability).
struct TermDetail {
  static constexpr std::size_t kComponents = kNumCells + 1;  // cells + intra

  // first[f][c] = integral of component c of factor f
  std::array<std::array<double, kComponents>, 3> first{};
  // pair(f, c, g, d) = integral of (f_c * g_d)
  std::vector<double> second = std::vector<double>(9 * kComponents * kComponents, 0.0);

  double& pair(Factor f, std::size_t c, Factor g, std::size_t d);
  double pair(Factor f, std::size_t c, Factor g, std::size_t d) const;
};

// Conditional statistics of X, Y, Z over one subset. Index 0/1/2 = X/Y/Z.
// mean and second are conditional (already divided by probability).
struct TermSet {
  ConnectionMode mode;
  double probability = 0.0;
  int factors = 1;
  std::array<double, 3> mean{};
  std::array<std::array<double, 3>, 3> second{};
  // Unnormalized breakdown, present when requested.
  std::optional<TermDetail> detail;

  bool defined() const { return probability > 0.0; }
  // Conditional E[T_a] or E[T_a T_b] from the detail (requires detail).
  double term(const TermId& a) const;
  double term(const TermId& a, const TermId& b) const;
};

struct SubsetMoments {
  ConnectionMode mode;
  double probability = 0.0;
  double beta_mean = 0.0;     // E[beta | subset]
  double beta_sq_mean = 0.0;  // E[beta^2 | subset]
  bool defined = false;       // false when probability == 0
  // |E[beta] - beta(means)| / beta(means); 0 for HHO.
  double taylor_correction = 0.0;
  bool taylor_strained = false;    // correction above kTaylorWarn
  bool negative_variance = false;  // beta_sq_mean < beta_mean^2
  TermSet terms;

  int participants() const { return mode.participants(); }
};

inline constexpr double kTaylorWarn = 0.30;

struct MomentReport {
  double beta_mean = 0.0;
  double beta_std = 0.0;
  double beta_sq_mean = 0.0;
  double camping_probability = 0.0;
  // sqrt of the probability-weighted conditional variances, i.e. the spread
  // left after removing the between-subset component. Diagnostic only.
  double pooled_within_std = 0.0;
  bool variance_clamped = false;
  int strained_subsets = 0;
  int negative_variance_subsets = 0;
  int pruned_subsets = 0;
  std::vector<SubsetMoments> subsets;  // sorted by mode then indices
  ScenarioParams scenario;
  QuadratureSpec quad;

  // Sum of subset probabilities of the given kind.
  double probability_of(ModeKind kind) const;
  const SubsetMoments* find(const ConnectionMode& mode) const;
};

struct MomentOptions {
  QuadratureSpec quad;
  // Skip SHO partners with C_{1,k} below this; 0 disables pruning.
  double partner_gain_floor = 1e-6;
  unsigned threads = 1;  // 0 = hardware concurrency
  bool term_detail = false;
};

// Region of a mode for the scenario's active-set size.
RegionSpec region_for(const ConnectionMode& mode, const ScenarioParams& p);

// Subset probabilities. prob_sho2 with as_size 3 integrates the partner
// window in closed form.
double prob_hho(const RegionSpec& region, const PropagationEnv& env,
                const QuadratureSpec& quad);
double prob_sho2(const RegionSpec& region, const PropagationEnv& env,
                 const QuadratureSpec& quad);
double prob_sho3(const RegionSpec& region, const PropagationEnv& env,
                 const QuadratureSpec& quad);
double subset_probability(const RegionSpec& region, const PropagationEnv& env,
                          const QuadratureSpec& quad);

// All X/Y/Z statistics of a subset in one pass. Non-anchor cells are
// conditionally independent given the anchors, so each node needs only the
// truncated moments A(a,1)/A(a,0) and A(a,2)/A(a,0) of every other cell.
TermSet subset_terms(const RegionSpec& region, const LinkModel& model,
                     const QuadratureSpec& quad, bool detail = false);
TermSet hho_terms(const RegionSpec& region, const LinkModel& model,
                  const QuadratureSpec& quad, bool detail = false);
TermSet sho2_terms(const RegionSpec& region, const LinkModel& model,
                   const QuadratureSpec& quad, bool detail = false);
TermSet sho3_terms(const RegionSpec& region, const LinkModel& model,
                   const QuadratureSpec& quad, bool detail = false);

// One term integral evaluated on its own, with the tilts of each anchor and
// the A(., y) orders of the other cells derived from the term's exponents.
// Returns the conditional value (divided by the subset probability).
double term_value(const RegionSpec& region, const LinkModel& model,
                  const QuadratureSpec& quad, const TermId& a);
double term_value(const RegionSpec& region, const LinkModel& model,
                  const QuadratureSpec& quad, const TermId& a, const TermId& b);

// Moment assembly from a term set.
SubsetMoments hho_moments(const TermSet& terms, double ct);
SubsetMoments sho2_moments(const TermSet& terms, double ct);
SubsetMoments sho3_moments(const TermSet& terms, double ct);
SubsetMoments subset_moments(const TermSet& terms, double ct);

// Throws NoCoverageError when the total probability is 0. Sorts subsets.
MomentReport aggregate(std::vector<SubsetMoments> subsets);

// Full pipeline for one evaluation point.
MomentReport compute_moments(const ScenarioParams& p, const MomentOptions& opt = {});

}  // namespace cdmapower
