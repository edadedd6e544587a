#include <benchmark/benchmark.h>

#include <random>

#include "doikit/linalg.hpp"

using namespace doikit;

namespace {

ComplexMatrix normal_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix u = random_unitary(n, rng);
  std::normal_distribution<double> g;
  std::vector<Complex> lambda(n);
  for (auto& z : lambda) z = Complex(g(rng), g(rng));
  return from_spectrum(u, lambda);
}

}  // namespace

static void BM_HermitianEigen(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ComplexMatrix h = random_hermitian(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(h));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HermitianEigen)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_NormalSpectral(benchmark::State& state) {
  const ComplexMatrix n = normal_matrix(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(normal_spectral(n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalSpectral)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_SingularValues(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const ComplexMatrix t = random_gaussian_matrix(state.range(0), state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(t));
}
BENCHMARK(BM_SingularValues)->RangeMultiplier(2)->Range(4, 64);
