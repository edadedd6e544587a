#include <benchmark/benchmark.h>

#include "doikit/funcspace.hpp"
#include "doikit/symbols.hpp"

using namespace doikit;

static void BM_HolderSeminorm(benchmark::State& state) {
  SeminormOptions o;
  o.box = Box{Complex(0.0, 0.0), 2.0};
  o.budget = state.range(0);
  const auto f = symbols::abs_power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(holder_seminorm(f, 0.5, o));
}
BENCHMARK(BM_HolderSeminorm)->RangeMultiplier(4)->Range(64, 16384);

static void BM_BesovNorm(benchmark::State& state) {
  const TrigPoly2D f = symbols::random_trig_poly(1, state.range(0), 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(besov_norm(f, 1.0));
}
BENCHMARK(BM_BesovNorm)->Arg(1)->Arg(4)->Arg(16);

static void BM_OmegaStarQuadrature(benchmark::State& state) {
  const auto omega = ModulusOfContinuity::capped_linear();
  for (auto _ : state) benchmark::DoNotOptimize(omega_star_quadrature(omega, 0.37));
}
BENCHMARK(BM_OmegaStarQuadrature);
