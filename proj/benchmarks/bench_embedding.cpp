#include "edmkit/embedding.hpp"
#include "edmkit/random.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_AssembleEdm(benchmark::State& state) {
  edm::Rng rng(1);
  const edm::PointSet x(edm::uniform_matrix(rng, 3, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(edm::assemble_edm(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleEdm)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_ClassicalMds(benchmark::State& state) {
  edm::Rng rng(2);
  const edm::DistanceMatrix d = edm::assemble_edm(edm::PointSet(edm::uniform_matrix(rng, 3, state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(edm::classical_mds(d, 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassicalMds)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Procrustes(benchmark::State& state) {
  edm::Rng rng(3);
  const edm::Matrix x = edm::gaussian_matrix(rng, 3, state.range(0));
  const edm::Matrix y = edm::random_orthogonal(rng, 3) * x;
  for (auto _ : state) benchmark::DoNotOptimize(edm::procrustes(x, y));
}
BENCHMARK(BM_Procrustes)->Arg(20)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
