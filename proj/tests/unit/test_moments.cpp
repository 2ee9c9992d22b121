#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cdmapower/errors.hpp"
#include "cdmapower/moments.hpp"
#include "cdmapower/montecarlo.hpp"
#include "test_support.hpp"

using namespace cdmapower;
namespace tst = cdmapower::testing;
using tst::Gen;

namespace {

// Cells sorted by distance from the MS, nearest first, serving cell excluded.
std::vector<CellIndex> by_distance(const MsView& v) {
  std::vector<CellIndex> out;
  for (CellIndex i = 1; i < kNumCells; ++i) out.push_back(i);
  std::stable_sort(out.begin(), out.end(), [&](auto a, auto b) { return v.r[a] < v.r[b]; });
  return out;
}

McConfig mc(std::size_t samples, std::uint64_t seed = 7) {
  McConfig c;
  c.samples_per_round = samples;
  c.rounds = 5;
  c.master_seed = seed;
  c.threads = 0;
  return c;
}

MomentOptions no_pruning() {
  MomentOptions o;
  o.partner_gain_floor = 0.0;
  o.threads = 0;
  return o;
}

// Direct evaluation of the AS=1 pipeline: one outer integral per term,
// adaptive Gauss-Kronrod, the tilted CDF written out from erfc.
struct DirectHho {
  double p = 0.0;
  double x_mean = 0.0;  // conditional E[X]
  double x_sq = 0.0;    // conditional E[X^2]
};

DirectHho direct_hho(const ScenarioParams& sp) {
  const MsView v = sp.view();
  const double sigma = sp.env.sigma_db;
  const double b = sp.env.b_corr;
  const double kappa = sigma * b * std::numbers::ln10 / 10.0;
  auto big_a = [&](double x, int y) {
    return std::exp(y * y * kappa * kappa / 2.0) * 0.5 *
           std::erfc(-(x / sigma - y * kappa) / std::sqrt(2.0));
  };
  std::vector<double> c(kNumCells, 0.0);
  std::vector<double> off(kNumCells, 0.0);
  for (CellIndex i = 1; i < kNumCells; ++i) {
    c[i] = std::pow(v.r[0] / v.r[i], sp.env.alpha);
    off[i] = -10.0 * std::log10(c[i]) / b + sp.policy.cst_db / b;
  }
  auto phi = [&](double t) {
    return std::exp(-0.5 * t * t / (sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi));
  };
  // integral of phi(t) 10^{-tilt b t/10} prod_n A(t + off_n, order_n)
  auto outer = [&](int tilt, const std::vector<int>& order) {
    auto f = [&](double t) {
      double v = phi(t) * std::pow(10.0, -tilt * b * t / 10.0);
      for (CellIndex n = 1; n < kNumCells; ++n) v *= big_a(t + off[n], order[n]);
      return v;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, -16.0 * sigma, 16.0 * sigma, 15, 1e-13);
  };
  DirectHho d;
  const std::vector<int> zero(kNumCells, 0);
  d.p = outer(0, zero);
  const double intra = 1.0 - sp.service.orthogonality;
  double s1 = 0.0;
  double s2 = 0.0;
  for (CellIndex i = 1; i < kNumCells; ++i) {
    auto o1 = zero;
    o1[i] = 1;
    s1 += c[i] * outer(1, o1);
    auto o2 = zero;
    o2[i] = 2;
    s2 += c[i] * c[i] * outer(2, o2);
    for (CellIndex j = 1; j < kNumCells; ++j) {
      if (j == i) continue;
      auto o11 = zero;
      o11[i] = 1;
      o11[j] = 1;
      s2 += c[i] * c[j] * outer(2, o11);
    }
  }
  d.x_mean = intra + s1 / d.p;
  d.x_sq = intra * intra + 2.0 * intra * s1 / d.p + s2 / d.p;
  return d;
}

TermSet flat_terms(ModeKind kind, std::array<double, 3> m, double p = 0.4) {
  TermSet t;
  t.mode = kind == ModeKind::kHho    ? ConnectionMode::hho()
           : kind == ModeKind::kSho2 ? ConnectionMode::sho2(1)
                                     : ConnectionMode::sho3(1, 2);
  t.probability = p;
  t.factors = kind == ModeKind::kHho ? 1 : kind == ModeKind::kSho2 ? 2 : 3;
  t.mean = m;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) t.second[a][b] = m[a] * m[b];
  }
  return t;
}

}  // namespace

TEST(Probability, CoSitedIsCertain) {
  auto p = tst::table1(0.0);
  const auto quad = QuadratureSpec{};
  EXPECT_NEAR(prob_hho(region_for(ConnectionMode::hho(), p), p.env, quad), 1.0, 1e-12);
  p.service.orthogonality = 1.0;
  const MomentReport r = compute_moments(p, no_pruning());
  EXPECT_NEAR(r.beta_mean, 0.0, 1e-15);
  EXPECT_NEAR(r.camping_probability, 1.0, 1e-12);
}

TEST(Probability, ThreeWayCornerIsOneThird) {
  // alpha = 100 pushes every site but the three around the corner out of reach.
  const auto p = ScenarioParams::at_normalized(PropagationEnv::make(100.0, 8.0, 1 / std::sqrt(2.0)),
                                               {}, {1, 0.0, 0.0}, 30.0, 1.0);
  const double pr = prob_hho(region_for(ConnectionMode::hho(), p), p.env, QuadratureSpec{});
  EXPECT_NEAR(pr, 1.0 / 3.0, 1e-8);
}

TEST(Probability, ZeroThresholdsKillSoftHandoff) {
  const auto quad = QuadratureSpec{};
  for (int m : {2, 3}) {
    const auto p = ScenarioParams::at_normalized(tst::env(3, 8), {}, {m, 0.0, 0.0}, 15.0, 0.9);
    for (CellIndex k : {CellIndex{1}, CellIndex{6}, CellIndex{14}}) {
      EXPECT_EQ(prob_sho2(region_for(ConnectionMode::sho2(k), p), p.env, quad), 0.0);
    }
    if (m == 3) {
      EXPECT_EQ(prob_sho3(region_for(ConnectionMode::sho3(1, 2), p), p.env, quad), 0.0);
    }
  }
}

TEST(Probability, MirrorPartnersMatch) {
  const auto g = build_layout(1.0);
  const auto quad = QuadratureSpec{};
  // corner bisector, 2-way
  const auto p2 = tst::table2(0.9);
  const LinkModel m2 = LinkModel::from(p2);
  for (CellIndex k = 1; k < kNumCells; ++k) {
    const CellIndex kk = tst::mirror_site(g, k, 30.0);
    if (kk <= k) continue;
    const TermSet a = subset_terms(region_for(ConnectionMode::sho2(k), p2), m2, quad);
    const TermSet b = subset_terms(region_for(ConnectionMode::sho2(kk), p2), m2, quad);
    EXPECT_NEAR(a.probability, b.probability, 1e-8 * std::max(a.probability, 1e-300));
    for (int f = 0; f < 2; ++f) {
      EXPECT_NEAR(a.mean[f], b.mean[f], 1e-8 * a.mean[f]) << k;
      for (int h = 0; h < 2; ++h) EXPECT_NEAR(a.second[f][h], b.second[f][h], 1e-8 * a.second[f][h]);
    }
  }
  // flat-side axis, 3-way
  const auto p3 = tst::table3(0.8);
  const LinkModel m3 = LinkModel::from(p3);
  const auto near = by_distance(p3.view());
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      const CellIndex k = near[i];
      const CellIndex l = near[j];
      const CellIndex kk = tst::mirror_site(g, k, 0.0);
      const CellIndex ll = tst::mirror_site(g, l, 0.0);
      const TermSet a = subset_terms(region_for(ConnectionMode::sho3(k, l), p3), m3, quad);
      const TermSet b = subset_terms(region_for(ConnectionMode::sho3(kk, ll), p3), m3, quad);
      EXPECT_NEAR(a.probability, b.probability, 1e-8 * a.probability);
      for (int f = 0; f < 3; ++f) {
        EXPECT_NEAR(a.mean[f], b.mean[f], 1e-8 * a.mean[f]);
        for (int h = 0; h < 3; ++h) EXPECT_NEAR(a.second[f][h], b.second[f][h], 1e-8 * a.second[f][h]);
      }
    }
  }
}

TEST(Probability, MatchesMonteCarloOccupancy) {
  for (const auto& p : {tst::table1(0.8), tst::table2(0.8), tst::table3(0.8)}) {
    const MomentReport th = compute_moments(p, no_pruning());
    const McEstimate est = run(p, mc(100000, 11));
    const double camp = est.camping_frequency();
    EXPECT_LE(std::abs(th.camping_probability - camp), 3.0 * est.frequency_se(camp))
        << p.policy.as_size;
    for (auto kind : {ModeKind::kHho, ModeKind::kSho2, ModeKind::kSho3}) {
      const double f = est.frequency(kind);
      EXPECT_LE(std::abs(th.probability_of(kind) - f), 3.0 * est.frequency_se(f) + 1e-12)
          << p.policy.as_size << " kind " << static_cast<int>(kind);
    }
  }
}

TEST(Probability, NodeDoublingIsStable) {
  const auto p = tst::table3(0.9);
  const auto near = by_distance(p.view());
  QuadratureSpec a;
  QuadratureSpec b;
  b.nodes_per_dim *= 2;
  for (const auto& mode : {ConnectionMode::hho(), ConnectionMode::sho2(near[0]),
                           ConnectionMode::sho3(near[0], near[1])}) {
    const RegionSpec r = region_for(mode, p);
    const double pa = subset_probability(r, p.env, a);
    const double pb = subset_probability(r, p.env, b);
    EXPECT_NEAR(pa, pb, 10.0 * a.rel_tol * pb) << mode.label();
  }
}

TEST(Terms, CombinedPassMatchesPerTermRoute) {
  Gen gen(5);
  const QuadratureSpec quad;
  struct Case {
    ScenarioParams p;
    ConnectionMode mode;
  };
  const auto p1 = tst::table1(0.9);
  const auto p2 = tst::table2(0.9);
  const auto p3 = tst::table3(0.9);
  const auto n2 = by_distance(p2.view());
  const auto n3 = by_distance(p3.view());
  const std::vector<Case> cases{{p1, ConnectionMode::hho()},
                                {p2, ConnectionMode::sho2(n2[0])},
                                {p3, ConnectionMode::sho2(n3[0])},
                                {p3, ConnectionMode::sho3(n3[0], n3[1])},
                                {p3, ConnectionMode::sho3(n3[2], n3[0])}};
  for (const auto& c : cases) {
    const RegionSpec region = region_for(c.mode, c.p);
    const LinkModel model = LinkModel::from(c.p);
    const TermSet ts = subset_terms(region, model, quad, true);
    const std::array<CellIndex, 3> own{kServingCell, c.mode.k, c.mode.l};
    const int nf = c.mode.participants();
    auto pick = [&] {
      for (;;) {
        const auto f = static_cast<std::size_t>(gen.integer(0, nf - 1));
        // favour the cells that matter: anchors and the intra term
        std::size_t comp;
        switch (gen.integer(0, 3)) {
          case 0:
            comp = kIntraComponent;
            break;
          case 1:
            comp = own[static_cast<std::size_t>(gen.integer(0, nf - 1))];
            break;
          case 2:
            comp = n3[static_cast<std::size_t>(gen.integer(0, 3))];
            break;
          default:
            comp = static_cast<std::size_t>(gen.integer(0, 18));
        }
        if (comp != own[f]) return TermId{static_cast<Factor>(f), comp};
      }
    };
    for (int t = 0; t < 12; ++t) {
      const TermId a = pick();
      const TermId b = pick();
      const double single = term_value(region, model, quad, a);
      EXPECT_NEAR(ts.term(a), single, 1e-7 * std::abs(single) + 1e-300)
          << c.mode.label() << " " << a.label();
      const double pair = term_value(region, model, quad, a, b);
      EXPECT_NEAR(ts.term(a, b), pair, 1e-7 * std::abs(pair) + 1e-300)
          << c.mode.label() << " " << a.label() << "*" << b.label();
    }
    // the aggregated means are sums of the components
    for (int f = 0; f < nf; ++f) {
      double s = 0.0;
      for (std::size_t comp = 0; comp <= kIntraComponent; ++comp) {
        if (comp != own[static_cast<std::size_t>(f)]) s += ts.term({static_cast<Factor>(f), comp});
      }
      EXPECT_NEAR(s, ts.mean[f], 1e-10 * ts.mean[f]);
    }
  }
}

TEST(Terms, IntraComponentIsConstant) {
  const auto p = tst::table2(0.7);
  const TermSet ts =
      subset_terms(region_for(ConnectionMode::hho(), p), LinkModel::from(p), QuadratureSpec{}, true);
  const TermId x0{Factor::kX, kIntraComponent};
  EXPECT_NEAR(ts.term(x0), 0.1, 1e-12);
  EXPECT_NEAR(ts.term(x0, x0), 0.01, 1e-12);
  const TermId x3{Factor::kX, 2};
  EXPECT_NEAR(ts.term(x0, x3), 0.1 * ts.term(x3), 1e-14);
  EXPECT_THROW(term_value(region_for(ConnectionMode::hho(), p), LinkModel::from(p), QuadratureSpec{},
                          TermId{Factor::kY, 3}),
               InvalidParameterError);
}

TEST(Terms, MatchConditionalMonteCarlo) {
  const QuadratureSpec quad;
  const McConfig cfg = mc(200000, 23);
  struct Case {
    ScenarioParams p;
    ConnectionMode mode;
    std::vector<std::pair<TermId, std::optional<TermId>>> terms;
  };
  const auto p2 = tst::table2(0.9);
  const auto p3 = tst::table3(0.8);
  const auto n2 = by_distance(p2.view());
  const auto n3 = by_distance(p3.view());
  const CellIndex k2 = n2[0], j2 = n2[1];
  const CellIndex k = n3[0], l = n3[1], j = n3[2];
  using F = Factor;
  const std::vector<Case> cases{
      {tst::table1(0.9), ConnectionMode::hho(),
       {{{F::kX, n2[0]}, std::nullopt}, {{F::kX, n2[0]}, TermId{F::kX, n2[1]}}}},
      {p2, ConnectionMode::sho2(k2),
       {{{F::kX, k2}, std::nullopt},
        {{F::kY, 0}, std::nullopt},
        {{F::kX, j2}, std::nullopt},
        {{F::kX, k2}, TermId{F::kY, 0}},
        {{F::kX, j2}, TermId{F::kY, j2}},
        {{F::kY, j2}, TermId{F::kY, j2}}}},
      {p3, ConnectionMode::sho2(k),
       {{{F::kY, 0}, std::nullopt}, {{F::kX, k}, TermId{F::kY, l}}}},
      {p3, ConnectionMode::sho3(k, l),
       {{{F::kX, l}, std::nullopt},
        {{F::kZ, k}, std::nullopt},
        {{F::kY, j}, std::nullopt},
        {{F::kX, l}, TermId{F::kY, 0}},
        {{F::kY, j}, TermId{F::kZ, j}},
        {{F::kX, k}, TermId{F::kX, k}},
        {{F::kZ, 0}, TermId{F::kX, j}}}},
  };
  for (const auto& c : cases) {
    const RegionSpec region = region_for(c.mode, c.p);
    const LinkModel model = LinkModel::from(c.p);
    for (const auto& [a, b] : c.terms) {
      const double th = b ? term_value(region, model, quad, a, *b) : term_value(region, model, quad, a);
      const TermEstimate est = conditional_term_estimate(c.p, cfg, c.mode, a, b);
      // some products are constant (X_k Y_1 == 1), hence the absolute floor
      EXPECT_LE(std::abs(th - est.value), 3.0 * est.se + 1e-12)
          << c.mode.label() << " " << a.label() << (b ? "*" + b->label() : "") << " theory " << th
          << " mc " << est.value << " se " << est.se;
    }
  }
}

TEST(Moments, NearDeterministicLimit) {
  auto p = tst::table2(0.7);
  p.env.sigma_db = 1e-3;
  const MsView v = p.view();
  double x = 1.0 - p.service.orthogonality;
  for (CellIndex i = 1; i < kNumCells; ++i) x += gain_ratio(v, 0, i, p.env.alpha);
  const double ct = load_constant(p.service);
  const MomentReport r = compute_moments(p, no_pruning());
  EXPECT_NEAR(r.camping_probability, 1.0, 1e-12);
  EXPECT_NEAR(r.beta_mean, ct * x, 1e-6 * ct * x);
  // the spread shrinks in proportion to sigma
  EXPECT_LT(r.beta_std, 1e-3 * r.beta_mean);
  p.env.sigma_db = 5e-4;
  const MomentReport half = compute_moments(p, no_pruning());
  EXPECT_NEAR(half.beta_std / r.beta_std, 0.5, 1e-3);
}

TEST(Moments, HhoMatchesDirectImplementation) {
  for (double r : {0.6, 0.8, 1.0}) {
    const auto p = tst::table1(r);
    const DirectHho d = direct_hho(p);
    const MomentReport rep = compute_moments(p, no_pruning());
    const double ct = load_constant(p.service);
    ASSERT_EQ(rep.subsets.size(), 1u);
    EXPECT_NEAR(rep.camping_probability, d.p, 1e-9 * d.p);
    EXPECT_NEAR(rep.beta_mean, ct * d.x_mean, 1e-8 * ct * d.x_mean);
    EXPECT_NEAR(rep.beta_sq_mean, ct * ct * d.x_sq, 1e-7 * ct * ct * d.x_sq);
    EXPECT_GE(rep.beta_sq_mean, rep.beta_mean * rep.beta_mean);
    EXPECT_FALSE(rep.subsets[0].negative_variance);
  }
}

TEST(Moments, TaylorDegenerateCases) {
  const double ct = 0.004375;
  const auto h = hho_moments(flat_terms(ModeKind::kHho, {2.0, 0, 0}), ct);
  EXPECT_DOUBLE_EQ(h.beta_mean, ct * 2.0);
  EXPECT_NEAR(h.beta_sq_mean, ct * ct * 4.0, 1e-18);

  const auto s2 = sho2_moments(flat_terms(ModeKind::kSho2, {2.0, 3.0, 0}), ct);
  EXPECT_NEAR(s2.beta_mean, ct * 6.0 / 5.0, 1e-16);
  EXPECT_NEAR(s2.beta_sq_mean, s2.beta_mean * s2.beta_mean, 1e-18);
  EXPECT_NEAR(s2.taylor_correction, 0.0, 1e-14);

  const auto s3 = sho3_moments(flat_terms(ModeKind::kSho3, {2.0, 3.0, 4.0}), ct);
  EXPECT_NEAR(s3.beta_mean, ct * 24.0 / 26.0, 1e-16);
  EXPECT_NEAR(s3.beta_sq_mean, s3.beta_mean * s3.beta_mean, 1e-18);

  EXPECT_THROW(sho2_moments(flat_terms(ModeKind::kHho, {1, 1, 0}), ct), InvalidParameterError);
  auto empty = flat_terms(ModeKind::kSho2, {1, 1, 0}, 0.0);
  EXPECT_FALSE(sho2_moments(empty, ct).defined);
}

TEST(Moments, TaylorSymmetry) {
  Gen gen(9);
  const double ct = 0.004375;
  for (int t = 0; t < 100; ++t) {
    // random positive-definite second moments around random means
    std::array<double, 3> m{gen.uniform(0.5, 3), gen.uniform(0.5, 3), gen.uniform(0.5, 3)};
    std::array<std::array<double, 3>, 3> cov{};
    std::array<std::array<double, 3>, 3> l{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j <= i; ++j) l[i][j] = gen.uniform(-0.5, 0.5);
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int q = 0; q < 3; ++q) cov[i][j] += l[i][q] * l[j][q];
      }
    }
    auto make = [&](ModeKind kind, std::array<int, 3> perm) {
      TermSet ts = flat_terms(kind, {m[perm[0]], m[perm[1]], m[perm[2]]});
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) ts.second[i][j] += cov[perm[i]][perm[j]];
      }
      return ts;
    };
    const auto a2 = sho2_moments(make(ModeKind::kSho2, {0, 1, 2}), ct);
    const auto b2 = sho2_moments(make(ModeKind::kSho2, {1, 0, 2}), ct);
    EXPECT_NEAR(a2.beta_mean, b2.beta_mean, 1e-12 * std::abs(a2.beta_mean));
    EXPECT_NEAR(a2.beta_sq_mean, b2.beta_sq_mean, 1e-12 * std::abs(a2.beta_sq_mean));
    const auto a3 = sho3_moments(make(ModeKind::kSho3, {0, 1, 2}), ct);
    for (auto perm : {std::array{1, 0, 2}, std::array{2, 1, 0}, std::array{1, 2, 0}}) {
      const auto b3 = sho3_moments(make(ModeKind::kSho3, perm), ct);
      EXPECT_NEAR(a3.beta_mean, b3.beta_mean, 1e-12 * std::abs(a3.beta_mean));
      EXPECT_NEAR(a3.beta_sq_mean, b3.beta_sq_mean, 1e-12 * std::abs(a3.beta_sq_mean));
    }
  }
}

TEST(Aggregate, TrivialCases) {
  const double ct = 0.004375;
  TermSet ts = flat_terms(ModeKind::kHho, {2.0, 0, 0}, 0.7);
  ts.second[0][0] = 5.0;
  const SubsetMoments one = hho_moments(ts, ct);
  const MomentReport r1 = aggregate({one});
  EXPECT_DOUBLE_EQ(r1.beta_mean, one.beta_mean);
  EXPECT_DOUBLE_EQ(r1.beta_sq_mean, one.beta_sq_mean);
  EXPECT_DOUBLE_EQ(r1.camping_probability, 0.7);
  EXPECT_NEAR(r1.beta_std, ct, 1e-15);

  SubsetMoments twin = one;
  twin.mode = ConnectionMode::sho2(3);
  const MomentReport r2 = aggregate({twin, one});
  EXPECT_NEAR(r2.beta_mean, one.beta_mean, 1e-18);
  EXPECT_NEAR(r2.beta_std, r1.beta_std, 1e-15);
  EXPECT_EQ(r2.subsets.front().mode, ConnectionMode::hho());  // sorted

  SubsetMoments dead = one;
  dead.probability = 0.0;
  dead.defined = false;
  EXPECT_THROW(aggregate({dead}), NoCoverageError);
  EXPECT_THROW(aggregate({}), NoCoverageError);
}

TEST(Aggregate, FarOutsideCellStaysFinite) {
  // beyond the cell border camping is unlikely but not impossible
  const auto p = ScenarioParams::at_normalized(tst::env(3, 8), {}, {1, 0.0, 0.0}, 0.0, 1.8);
  const MomentReport r = compute_moments(p, no_pruning());
  EXPECT_GT(r.camping_probability, 0.0);
  EXPECT_LT(r.camping_probability, 0.5);
}

TEST(Moments, ThreadedEqualsSerial) {
  const auto p = tst::table2(0.8);
  MomentOptions serial = no_pruning();
  serial.threads = 1;
  MomentOptions threaded = no_pruning();
  threaded.threads = 4;
  const MomentReport a = compute_moments(p, serial);
  const MomentReport b = compute_moments(p, threaded);
  EXPECT_EQ(a.beta_mean, b.beta_mean);
  EXPECT_EQ(a.beta_std, b.beta_std);
  EXPECT_EQ(a.camping_probability, b.camping_probability);
}

TEST(Moments, PruningDropsNegligiblePartners) {
  const auto p = tst::table2(0.8);
  MomentOptions pruned = no_pruning();
  pruned.partner_gain_floor = 0.02;
  const MomentReport a = compute_moments(p, no_pruning());
  const MomentReport b = compute_moments(p, pruned);
  EXPECT_EQ(a.pruned_subsets, 0);
  EXPECT_GT(b.pruned_subsets, 0);
  EXPECT_NEAR(a.beta_mean, b.beta_mean, 1e-2 * a.beta_mean);
  MomentOptions bad;
  bad.partner_gain_floor = -1.0;
  EXPECT_THROW(compute_moments(p, bad), InvalidParameterError);
}

TEST(Moments, NodeDoublingMovesMeanLittle) {
  const auto p = tst::table2(0.8);
  MomentOptions a = no_pruning();
  MomentOptions b = no_pruning();
  b.quad.nodes_per_dim *= 2;
  const MomentReport ra = compute_moments(p, a);
  const MomentReport rb = compute_moments(p, b);
  EXPECT_LT(tst::rel_diff(ra.beta_mean, rb.beta_mean), 1e-3);
  EXPECT_LT(tst::rel_diff(ra.beta_std, rb.beta_std), 1e-3);
}
