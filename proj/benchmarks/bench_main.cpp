#include <benchmark/benchmark.h>

#include <cmath>

#include "cdmapower/moments.hpp"
#include "cdmapower/montecarlo.hpp"
#include "cdmapower/quadrature.hpp"

using namespace cdmapower;

namespace {

ScenarioParams scenario(int as_size, double r) {
  const auto env = PropagationEnv::make(as_size == 3 ? 4.0 : 3.0, as_size == 3 ? 10.0 : 8.0,
                                        1.0 / std::sqrt(2.0));
  const double theta = as_size == 1 ? 15.0 : as_size == 2 ? 30.0 : 0.0;
  return ScenarioParams::at_normalized(env, {}, {as_size, 1.0, 3.0}, theta, r);
}

void BM_AFunction(benchmark::State& state) {
  double x = -20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a_fn(x, 2, 8.0, 0.7));
    x = x > 20.0 ? -20.0 : x + 0.01;
  }
}
BENCHMARK(BM_AFunction);

void BM_SubsetTerms(benchmark::State& state) {
  const int as = static_cast<int>(state.range(0));
  const ScenarioParams p = scenario(as, 0.9);
  const ConnectionMode mode = as == 1   ? ConnectionMode::hho()
                              : as == 2 ? ConnectionMode::sho2(1)
                                        : ConnectionMode::sho3(1, 2);
  const RegionSpec region = region_for(mode, p);
  const LinkModel model = LinkModel::from(p);
  const QuadratureSpec quad;
  for (auto _ : state) benchmark::DoNotOptimize(subset_terms(region, model, quad).mean[0]);
}
BENCHMARK(BM_SubsetTerms)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ComputeMoments(benchmark::State& state) {
  const ScenarioParams p = scenario(static_cast<int>(state.range(0)), 0.9);
  MomentOptions opt;
  opt.partner_gain_floor = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(compute_moments(p, opt).beta_mean);
}
BENCHMARK(BM_ComputeMoments)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const ScenarioParams p = scenario(static_cast<int>(state.range(0)), 0.9);
  McConfig cfg;
  cfg.samples_per_round = 100000;
  cfg.rounds = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run(p, cfg).beta_mean);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.samples_per_round));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
