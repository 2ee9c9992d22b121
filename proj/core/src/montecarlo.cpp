#include "cdmapower/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "cdmapower/errors.hpp"

namespace cdmapower {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Everything needed to turn one shadowing draw into a mode and a beta.
struct Sampler {
  Sampler(const ScenarioParams& p)
      : view(p.view()),
        table(view, p.env, p.service.orthogonality),
        classifier(p.policy.as_size, view, p.env, p.policy),
        ct(load_constant(p.service)),
        sigma(p.env.sigma_db) {}

  template <class Visit>
  void draw(std::uint64_t seed, std::size_t n, Visit&& visit) const {
    ShadowSampler shadow(seed, sigma);
    ShadowVector xi;
    std::array<double, kNumCells> levels;
    for (std::size_t s = 0; s < n; ++s) {
      shadow.next(xi);
      const ConnectionMode mode = classifier.classify(xi);
      if (mode.kind == ModeKind::kNotCamped) {
        visit(mode, levels, false);
        continue;
      }
      table.received_levels(xi, levels);
      visit(mode, levels, true);
    }
  }

  MsView view;
  InterferenceTable table;
  Classifier classifier;
  double ct;
  double sigma;
};

template <class Task>
void run_parallel(std::size_t count, unsigned threads, Task&& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
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
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct RoundAccum {
  ModeCounts counts;
  std::uint64_t camped = 0;
  std::uint64_t violations = 0;
  // raw power sums of beta
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

}  // namespace

void McConfig::validate() const {
  if (samples_per_round < 1000) {
    throw InvalidParameterError("samples_per_round must be >= 1000");
  }
  if (rounds < 1) throw InvalidParameterError("rounds must be >= 1");
}

std::uint64_t round_seed(std::uint64_t master_seed, std::size_t round) {
  return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(round) + 1));
}

void ModeCounts::add(const ConnectionMode& mode) {
  switch (mode.kind) {
    case ModeKind::kHho:
      ++hho;
      break;
    case ModeKind::kSho2:
      ++sho2.at(mode.k);
      break;
    case ModeKind::kSho3:
      ++sho3.at(mode.k).at(mode.l);
      break;
    case ModeKind::kNotCamped:
      ++not_camped;
      break;
  }
}

void ModeCounts::merge(const ModeCounts& o) {
  hho += o.hho;
  not_camped += o.not_camped;
  for (CellIndex k = 0; k < kNumCells; ++k) {
    sho2[k] += o.sho2[k];
    for (CellIndex l = 0; l < kNumCells; ++l) sho3[k][l] += o.sho3[k][l];
  }
}

std::uint64_t ModeCounts::of(const ConnectionMode& mode) const {
  switch (mode.kind) {
    case ModeKind::kHho:
      return hho;
    case ModeKind::kSho2:
      return sho2.at(mode.k);
    case ModeKind::kSho3:
      return sho3.at(mode.k).at(mode.l);
    case ModeKind::kNotCamped:
      return not_camped;
  }
  return 0;
}

std::uint64_t ModeCounts::of_kind(ModeKind kind) const {
  std::uint64_t n = 0;
  switch (kind) {
    case ModeKind::kHho:
      return hho;
    case ModeKind::kNotCamped:
      return not_camped;
    case ModeKind::kSho2:
      for (auto c : sho2) n += c;
      return n;
    case ModeKind::kSho3:
      for (const auto& row : sho3) {
        for (auto c : row) n += c;
      }
      return n;
  }
  return n;
}

std::uint64_t ModeCounts::total() const {
  return of_kind(ModeKind::kHho) + of_kind(ModeKind::kSho2) + of_kind(ModeKind::kSho3) +
         not_camped;
}

double McEstimate::frequency(const ConnectionMode& mode) const {
  return samples ? static_cast<double>(counts.of(mode)) / samples : 0.0;
}

double McEstimate::frequency(ModeKind kind) const {
  return samples ? static_cast<double>(counts.of_kind(kind)) / samples : 0.0;
}

double McEstimate::camping_frequency() const {
  return samples ? static_cast<double>(camped) / samples : 0.0;
}

double McEstimate::frequency_se(double p) const {
  return samples ? std::sqrt(std::max(0.0, p * (1.0 - p)) / samples) : 0.0;
}

McEstimate run(const ScenarioParams& p, const McConfig& cfg) {
  p.validate();
  cfg.validate();
  const Sampler sampler(p);
  const double ct = sampler.ct;
  constexpr double kRelSlack = 1e-12;

  std::vector<RoundAccum> acc(cfg.rounds);
  run_parallel(cfg.rounds, cfg.threads, [&](std::size_t r) {
    RoundAccum& a = acc[r];
    sampler.draw(round_seed(cfg.master_seed, r), cfg.samples_per_round,
                 [&](const ConnectionMode& mode, const auto& levels, bool camped) {
                   a.counts.add(mode);
                   if (!camped) return;
                   const double x = sampler.table.sum_from_levels(levels, kServingCell);
                   double beta = 0.0;
                   if (mode.kind == ModeKind::kHho) {
                     beta = beta_hho(ct, x);
                   } else {
                     const double y = sampler.table.sum_from_levels(levels, mode.k);
                     double hho_floor = std::min(x, y);
                     if (mode.kind == ModeKind::kSho2) {
                       beta = beta_sho2(ct, x, y);
                     } else {
                       const double z = sampler.table.sum_from_levels(levels, mode.l);
                       hho_floor = std::min(hho_floor, z);
                       beta = beta_sho3(ct, x, y, z);
                     }
                     if (beta > ct * hho_floor * (1.0 + kRelSlack)) ++a.violations;
                   }
                   ++a.camped;
                   const double b2 = beta * beta;
                   a.s1 += beta;
                   a.s2 += b2;
                   a.s3 += b2 * beta;
                   a.s4 += b2 * b2;
                 });
  });

  McEstimate est;
  RoundAccum total;
  for (const auto& a : acc) {
    McRound round;
    round.camped = a.camped;
    if (a.camped) {
      const double n = static_cast<double>(a.camped);
      round.beta_mean = a.s1 / n;
      round.beta_std = std::sqrt(std::max(0.0, a.s2 / n - round.beta_mean * round.beta_mean));
    }
    est.rounds.push_back(round);
    total.counts.merge(a.counts);
    total.camped += a.camped;
    total.violations += a.violations;
    total.s1 += a.s1;
    total.s2 += a.s2;
    total.s3 += a.s3;
    total.s4 += a.s4;
  }
  est.counts = total.counts;
  est.samples = static_cast<std::uint64_t>(cfg.rounds * cfg.samples_per_round);
  est.camped = total.camped;
  est.harmonic_violations = total.violations;
  if (total.camped == 0) return est;

  const double n = static_cast<double>(total.camped);
  const double m = total.s1 / n;
  const double var = std::max(0.0, total.s2 / n - m * m);
  est.beta_mean = m;
  est.beta_std = std::sqrt(var);
  est.beta_mean_se = std::sqrt(var / n);
  // fourth central moment from raw sums
  const double m4 = total.s4 / n - 4.0 * m * total.s3 / n + 6.0 * m * m * total.s2 / n -
                    3.0 * m * m * m * m;
  if (var > 0.0) {
    est.beta_std_se = std::sqrt(std::max(0.0, m4 - var * var) / (4.0 * var * n));
  }
  if (cfg.rounds > 1) {
    double mean_of_rounds = 0.0;
    for (const auto& r : est.rounds) mean_of_rounds += r.beta_mean;
    mean_of_rounds /= static_cast<double>(cfg.rounds);
    double ss = 0.0;
    for (const auto& r : est.rounds) ss += (r.beta_mean - mean_of_rounds) * (r.beta_mean - mean_of_rounds);
    est.beta_mean_se_between =
        std::sqrt(ss / static_cast<double>(cfg.rounds - 1) / static_cast<double>(cfg.rounds));
  }
  return est;
}

TermEstimate conditional_term_estimate(const ScenarioParams& p, const McConfig& cfg,
                                       const ConnectionMode& mode, const TermId& a,
                                       const std::optional<TermId>& b) {
  p.validate();
  cfg.validate();
  if (mode.kind == ModeKind::kNotCamped) {
    throw InvalidParameterError("terms are defined on camped subsets only");
  }
  const std::array<CellIndex, 3> own{kServingCell, mode.k, mode.l};
  auto check = [&](const TermId& t) {
    const auto f = static_cast<std::size_t>(t.factor);
    if (static_cast<int>(f) >= mode.participants() || t.component > kIntraComponent ||
        t.component == own[f]) {
      throw InvalidParameterError("term " + t.label() + " not defined for " + mode.label());
    }
  };
  check(a);
  if (b) check(*b);

  const Sampler sampler(p);
  const double intra = 1.0 - p.service.orthogonality;
  auto component = [&](const TermId& t, const std::array<double, kNumCells>& levels) {
    if (t.component == kIntraComponent) return intra;
    return levels[t.component] / levels[own[static_cast<std::size_t>(t.factor)]];
  };

  std::vector<TermEstimate> parts(cfg.rounds);
  std::vector<double> sq(cfg.rounds, 0.0);
  std::vector<double> lo(cfg.rounds, std::numeric_limits<double>::infinity());
  std::vector<double> hi(cfg.rounds, -std::numeric_limits<double>::infinity());
  run_parallel(cfg.rounds, cfg.threads, [&](std::size_t r) {
    double s1 = 0.0;
    double s2 = 0.0;
    std::uint64_t n = 0;
    sampler.draw(round_seed(cfg.master_seed, r), cfg.samples_per_round,
                 [&](const ConnectionMode& got, const auto& levels, bool camped) {
                   if (!camped || !(got == mode)) return;
                   double v = component(a, levels);
                   if (b) v *= component(*b, levels);
                   s1 += v;
                   s2 += v * v;
                   lo[r] = std::min(lo[r], v);
                   hi[r] = std::max(hi[r], v);
                   ++n;
                 });
    parts[r] = {s1, 0.0, n};
    sq[r] = s2;
  });

  double s1 = 0.0;
  double s2 = 0.0;
  std::uint64_t n = 0;
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    s1 += parts[r].value;
    s2 += sq[r];
    n += parts[r].count;
  }
  if (n < kMinConditionalSamples) {
    throw InsufficientSamplesError(std::to_string(n) + " samples in " + mode.label() +
                                   ", need " + std::to_string(kMinConditionalSamples));
  }
  const double dn = static_cast<double>(n);
  TermEstimate est;
  est.count = n;
  // constant products (the intra term, X_k Y_1) are reported exactly
  const double vmin = *std::min_element(lo.begin(), lo.end());
  const double vmax = *std::max_element(hi.begin(), hi.end());
  if (vmin == vmax) {
    est.value = vmin;
    return est;
  }
  est.value = s1 / dn;
  est.se = std::sqrt(std::max(0.0, s2 / dn - est.value * est.value) / dn);
  return est;
}

}  // namespace cdmapower
