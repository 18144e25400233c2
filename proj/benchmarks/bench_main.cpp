#include <benchmark/benchmark.h>

#include <cmath>

#include "polycycle/frequency.hpp"
#include "polycycle/rectifier.hpp"
#include "polycycle/rotation.hpp"
#include "polycycle/sparkler.hpp"

namespace {

using namespace polycycle;

void BM_Rectify(benchmark::State& state) {
  const MapFamilyPtr m = make_power_law({1.5, 2.0, 0.1, 1.0, false, 0.25});
  const double x = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rectify(*m, x, 1e-12));
}
BENCHMARK(BM_Rectify)->Arg(2)->Arg(6)->Arg(12);

void BM_SolveSpark(benchmark::State& state) {
  const SparkProblem p{make_power_law({1.0, 0.5, 0.0, 1.0, true, 0.5}), constant_target(0.25), state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_spark(p, 1e-13).eps.xi);
}
BENCHMARK(BM_SolveSpark)->Arg(5)->Arg(20)->Arg(40);

void BM_ThRun(benchmark::State& state) {
  THConfig c;
  c.lambda_i = 0.5;
  c.lambda_e = 1.25;
  c.xi_E = {0.0, 0.1};
  c.xi_I = {0.3};
  const InvariantVector inv = invariant_vector(c);
  for (auto _ : state) {
    const SparkTable t = th_sparks(c, state.range(0));
    const std::vector<Assignment> a = assign_k(t);
    benchmark::DoNotOptimize(frequencies(a, state.range(0), inv).psi.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ThRun)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_OrbitFrequency(benchmark::State& state) {
  RotationProblem p;
  p.rho = (std::sqrt(5.0) - 1.0) / 2.0;
  p.limit = Arc::from_endpoints(0.1, 0.35);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_frequency(p, state.range(0)).limsup_est);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OrbitFrequency)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
