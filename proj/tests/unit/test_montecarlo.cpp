#include <gtest/gtest.h>

#include <cmath>

#include "cdmapower/errors.hpp"
#include "cdmapower/montecarlo.hpp"
#include "test_support.hpp"

using namespace cdmapower;
namespace tst = cdmapower::testing;

namespace {

McConfig small(std::uint64_t seed = 3, std::size_t samples = 20000) {
  McConfig c;
  c.samples_per_round = samples;
  c.rounds = 5;
  c.master_seed = seed;
  c.threads = 0;
  return c;
}

}  // namespace

TEST(MonteCarlo, ConfigValidation) {
  McConfig c;
  EXPECT_NO_THROW(c.validate());
  c.samples_per_round = 999;
  EXPECT_THROW(c.validate(), InvalidParameterError);
  c = {};
  c.rounds = 0;
  EXPECT_THROW(c.validate(), InvalidParameterError);
  EXPECT_THROW(run(tst::table1(0.5), c), InvalidParameterError);
}

TEST(MonteCarlo, RoundSeedsDiffer) {
  EXPECT_NE(round_seed(1, 0), round_seed(1, 1));
  EXPECT_NE(round_seed(1, 0), round_seed(2, 0));
  EXPECT_EQ(round_seed(9, 4), round_seed(9, 4));
}

TEST(MonteCarlo, SamplerMarginal) {
  ShadowSampler s(123, 8.0);
  ShadowVector xi;
  double s1 = 0.0;
  double s2 = 0.0;
  constexpr int kDraws = 100000 / kNumCells + 1;
  for (int i = 0; i < kDraws; ++i) {
    s.next(xi);
    for (double v : xi) {
      s1 += v;
      s2 += v * v;
    }
  }
  const double n = kDraws * double(kNumCells);
  const double mean = s1 / n;
  const double sd = std::sqrt(s2 / n - mean * mean);
  EXPECT_NEAR(sd, 8.0, 0.08);
  EXPECT_NEAR(mean, 0.0, 5 * 8.0 / std::sqrt(n));
}

TEST(MonteCarlo, DeterministicAndThreadIndependent) {
  const auto p = tst::table2(0.9);
  McConfig a = small();
  a.threads = 1;
  McConfig b = small();
  b.threads = 4;
  const McEstimate x = run(p, a);
  const McEstimate y = run(p, b);
  EXPECT_EQ(x.beta_mean, y.beta_mean);
  EXPECT_EQ(x.beta_std, y.beta_std);
  EXPECT_EQ(x.camped, y.camped);
  EXPECT_EQ(x.counts.sho2, y.counts.sho2);
  for (std::size_t r = 0; r < x.rounds.size(); ++r) EXPECT_EQ(x.rounds[r].beta_mean, y.rounds[r].beta_mean);
}

TEST(MonteCarlo, SeedSensitivityWithinSixSe) {
  const auto p = tst::table3(0.8);
  const McEstimate a = run(p, small(1));
  const McEstimate b = run(p, small(2));
  EXPECT_NE(a.beta_mean, b.beta_mean);
  const double se = std::hypot(a.beta_mean_se, b.beta_mean_se);
  EXPECT_LE(std::abs(a.beta_mean - b.beta_mean), 6.0 * se);
  const double se_std = std::hypot(a.beta_std_se, b.beta_std_se);
  EXPECT_LE(std::abs(a.beta_std - b.beta_std), 6.0 * se_std);
}

TEST(MonteCarlo, CountsAndHarmonicBound) {
  for (const auto& p : {tst::table1(1.0), tst::table2(1.0), tst::table3(1.0)}) {
    const McConfig cfg = small(5);
    const McEstimate e = run(p, cfg);
    EXPECT_EQ(e.counts.total(), cfg.rounds * cfg.samples_per_round);
    EXPECT_EQ(e.samples, e.counts.total());
    EXPECT_EQ(e.camped, e.counts.total() - e.counts.not_camped);
    EXPECT_EQ(e.harmonic_violations, 0u);
    EXPECT_EQ(e.rounds.size(), cfg.rounds);
    EXPECT_GT(e.beta_mean_se, 0.0);
    EXPECT_GT(e.beta_mean_se_between, 0.0);
    if (p.policy.as_size == 1) EXPECT_EQ(e.counts.of_kind(ModeKind::kSho2), 0u);
    if (p.policy.as_size < 3) EXPECT_EQ(e.counts.of_kind(ModeKind::kSho3), 0u);
    for (CellIndex k = 0; k < kNumCells; ++k) EXPECT_EQ(e.counts.sho3[k][k], 0u);
  }
}

TEST(MonteCarlo, NearDeterministicLimit) {
  auto p = tst::table3(0.7);
  p.env.sigma_db = 1e-3;
  const MsView v = p.view();
  double x = 1.0 - p.service.orthogonality;
  for (CellIndex i = 1; i < kNumCells; ++i) x += gain_ratio(v, 0, i, p.env.alpha);
  const double beta = load_constant(p.service) * x;
  const McEstimate e = run(p, small(8, 5000));
  EXPECT_EQ(e.camped, e.samples);
  EXPECT_EQ(e.counts.hho, e.samples);
  EXPECT_NEAR(e.beta_mean, beta, 1e-6 * beta);
  EXPECT_LT(e.beta_std, 1e-3 * beta);
}

TEST(MonteCarlo, ConditionalTermEstimates) {
  const auto p = tst::table1(0.9);
  const McConfig cfg = small(4);
  const TermEstimate x0 = conditional_term_estimate(p, cfg, ConnectionMode::hho(),
                                                    {Factor::kX, kIntraComponent});
  EXPECT_DOUBLE_EQ(x0.value, 1.0 - p.service.orthogonality);
  EXPECT_EQ(x0.se, 0.0);
  EXPECT_GT(x0.count, kMinConditionalSamples);

  // the two tier-1 sites mirrored across the 15 degree ray are not
  // equidistant, but on the 30 degree ray they are
  const auto q = tst::table2(0.8);
  const auto g = build_layout(1.0);
  for (CellIndex i = 1; i <= 6; ++i) {
    const CellIndex j = tst::mirror_site(g, i, 30.0);
    if (j <= i) continue;
    const TermEstimate a = conditional_term_estimate(q, cfg, ConnectionMode::hho(), {Factor::kX, i});
    const TermEstimate b = conditional_term_estimate(q, cfg, ConnectionMode::hho(), {Factor::kX, j});
    EXPECT_LE(std::abs(a.value - b.value), 3.0 * std::hypot(a.se, b.se)) << i << " " << j;
  }
}

TEST(MonteCarlo, ConditionalTermErrors) {
  const auto p = tst::table2(0.3);
  const McConfig cfg = small(4, 1000);
  // a partner on the far side of the layout almost never joins the AS
  EXPECT_THROW(conditional_term_estimate(p, cfg, ConnectionMode::sho2(15), {Factor::kX, 3}),
               InsufficientSamplesError);
  EXPECT_THROW(conditional_term_estimate(p, cfg, ConnectionMode::not_camped(), {Factor::kX, 3}),
               InvalidParameterError);
  EXPECT_THROW(conditional_term_estimate(p, cfg, ConnectionMode::hho(), {Factor::kX, 0}),
               InvalidParameterError);
  EXPECT_THROW(conditional_term_estimate(p, cfg, ConnectionMode::hho(), {Factor::kY, 2}),
               InvalidParameterError);
}

TEST(MonteCarlo, FrequencyHelpers) {
  const McEstimate e = run(tst::table2(0.8), small(6));
  const double total = e.frequency(ModeKind::kHho) + e.frequency(ModeKind::kSho2) +
                       e.frequency(ModeKind::kNotCamped);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(e.camping_frequency(), 1.0 - e.frequency(ModeKind::kNotCamped), 1e-12);
  EXPECT_NEAR(e.frequency_se(0.5), std::sqrt(0.25 / e.samples), 1e-15);
}
