#include <benchmark/benchmark.h>

#include "scenerylab/diffeo.hpp"
#include "scenerylab/measure.hpp"
#include "scenerylab/scaling.hpp"
#include "scenerylab/scenery.hpp"
#include "scenerylab/shift_bernoulli.hpp"
#include "scenerylab/spec_json.hpp"

using namespace scenerylab;

static void BM_LogSumExp(benchmark::State& state) {
  const LogMass a = LogMass::fromLog(-3);
  const LogMass b = LogMass::fromLevel2(9);
  for (auto _ : state) benchmark::DoNotOptimize(logSumExp(a, b));
}
BENCHMARK(BM_LogSumExp);

static void BM_BernoulliMass(benchmark::State& state) {
  const BernoulliMeasure mu(WeightFamily::pN(3));
  const Real lo = rldexp(1, -20);
  const Interval J = Interval::closed(lo, lo * (1 + Real(1) / 16));
  for (auto _ : state) benchmark::DoNotOptimize(mu.logMass(J));
}
BENCHMARK(BM_BernoulliMass);

static void BM_AtomicScenery(benchmark::State& state) {
  const auto mu = std::make_shared<Pushforward>(resolveMeasure("ex1"), ex1Diffeo());
  const auto family = standardFamily();
  Real t = 10;
  for (auto _ : state) {
    const SceneryMeasure nu(mu, 0, t);
    for (const auto& phi : family) benchmark::DoNotOptimize(nu.integrate(phi));
    t += Real(1) / 100;
  }
}
BENCHMARK(BM_AtomicScenery);

static void BM_QuadratureScenery(benchmark::State& state) {
  const auto mu = std::make_shared<Pushforward>(resolveMeasure("ex3"), ex3Diffeo());
  const TestFunction phi = leftHalfTrapezoid();
  for (auto _ : state) benchmark::DoNotOptimize(SceneryMeasure(mu, 0, state.range(0)).integrate(phi));
}
BENCHMARK(BM_QuadratureScenery)->Arg(5)->Arg(20)->Arg(35);

static void BM_MonteCarlo(benchmark::State& state) {
  const BernoulliMeasure mu(WeightFamily::pN(3));
  MonteCarloConfig cfg;
  cfg.samples = state.range(0);
  const std::vector<TestFunction> family{TestFunction::constant1(), TestFunction::identity()};
  for (auto _ : state) benchmark::DoNotOptimize(generatedDistributionMoments(mu, family, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
