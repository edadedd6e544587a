#include <benchmark/benchmark.h>

#include <random>

#include "doikit/calculus.hpp"
#include "doikit/symbols.hpp"
#include "doikit/theorems.hpp"

using namespace doikit;

static void BM_DoubleOperatorIntegral(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto pair = random_normal_pair({n, PairMode::Independent, 0.1, 4});
  const auto s1 = normal_spectral(pair.n1), s2 = normal_spectral(pair.n2);
  const auto phi = divided_difference_kernel(symbols::abs_power(0.5), Axis::Y, {});
  std::mt19937_64 rng(5);
  const ComplexMatrix t = random_gaussian_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(double_operator_integral(phi, s1, t, s2));
}
BENCHMARK(BM_DoubleOperatorIntegral)->RangeMultiplier(2)->Range(4, 64);

static void BM_RepresentationDifference(benchmark::State& state) {
  const auto pair = random_normal_pair({static_cast<std::size_t>(state.range(0)), PairMode::Conjugated, 0.01, 6});
  const auto f = symbols::random_trig_poly(7, 6, 3.0).field();
  for (auto _ : state) benchmark::DoNotOptimize(representation_difference(f, pair.n1, pair.n2));
}
BENCHMARK(BM_RepresentationDifference)->RangeMultiplier(2)->Range(4, 32);

static void BM_HolderRatio(benchmark::State& state) {
  const auto pair = random_normal_pair({8, PairMode::Independent, 0.1, 8});
  const PreparedPair prepared = prepare_pair(pair.n1, pair.n2);
  RatioParams p;
  p.alpha = 0.5;
  p.seminorm_budget = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(theorem_ratio(TheoremTag::Holder, symbols::abs_power(0.5), prepared, p));
}
BENCHMARK(BM_HolderRatio)->Arg(64)->Arg(1024)->Arg(4096);
