#include <benchmark/benchmark.h>

#include "heatstring/integrator.hpp"
#include "heatstring/linear_spectral.hpp"
#include "heatstring/nonlinear_system.hpp"
#include "heatstring/presets.hpp"
#include "heatstring/projections.hpp"

namespace hs = heatstring;

static void BM_Rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = hs::ModelParams::make(1.0, 1.0, n);
  const auto st = hs::preset_random_smooth(p, 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(hs::rhs(st, p));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Rhs)->RangeMultiplier(2)->Range(16, 512)->Complexity();

static void BM_EtdStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = hs::ModelParams::make(1.0, 1.0, n);
  auto st = hs::preset_random_smooth(p, 1.0, 1);
  const hs::EtdStepper stepper(p, 1e-3, hs::theta_infinity(st, p));
  for (auto _ : state) {
    st = stepper.step(st);
    benchmark::DoNotOptimize(st.theta0);
  }
}
BENCHMARK(BM_EtdStep)->RangeMultiplier(2)->Range(16, 256);

static void BM_EigenExact(benchmark::State& state) {
  const auto p = hs::ModelParams::make(1.0, 2.0, 1);
  int n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hs::eigen_exact(n, p));
    n = n % 2048 + 1;
  }
}
BENCHMARK(BM_EigenExact);

static void BM_DuhamelMap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p0 = hs::ModelParams::make(1.0, 1.0, n);
  const auto init = hs::preset_small_data(p0, 1.0, 7, 1e-3);
  const double ti = hs::theta_infinity(init, p0);
  auto p = p0;
  p.a = ti;
  const auto basis = hs::make_basis(p);
  const auto ps = hs::to_projection(init, p, basis);
  const auto traj = hs::constant_trajectory(ps, 1.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(hs::duhamel_map(traj, ps, p, basis, ti));
}
BENCHMARK(BM_DuhamelMap)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
