#include "edmkit/completion.hpp"
#include "edmkit/random.hpp"

#include <benchmark/benchmark.h>

namespace {

// n points in the unit square with `deleted` of the off-diagonal pairs hidden.
edm::NoisyObservation instance(edm::Index n, int deleted, std::uint64_t seed) {
  edm::Rng rng(seed);
  const edm::DistanceMatrix d = edm::assemble_edm(edm::PointSet(edm::uniform_matrix(rng, 2, n)));
  edm::Matrix w = edm::Matrix::Ones(n, n);
  w.diagonal().setZero();
  for (int k = 0; k < deleted;) {
    const auto i = static_cast<edm::Index>(edm::uniform_index(rng, static_cast<std::uint64_t>(n)));
    const auto j = static_cast<edm::Index>(edm::uniform_index(rng, static_cast<std::uint64_t>(n)));
    if (i == j || w(i, j) == 0.0) continue;
    w(i, j) = w(j, i) = 0.0;
    ++k;
  }
  return edm::NoisyObservation(d.entries().cwiseProduct(w), edm::ObservationMask(w));
}

void BM_RankAlternation(benchmark::State& state) {
  const auto obs = instance(20, static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(edm::rank_complete_edm(obs, 2));
}
BENCHMARK(BM_RankAlternation)->Arg(20)->Arg(100);

void BM_OptSpace(benchmark::State& state) {
  const auto obs = instance(20, static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(edm::optspace_complete_edm(obs, 2));
}
BENCHMARK(BM_OptSpace)->Arg(20)->Arg(100);

void BM_AlternatingDescent(benchmark::State& state) {
  const auto obs = instance(20, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(edm::alternating_descent(obs, 2));
}
BENCHMARK(BM_AlternatingDescent)->Arg(20)->Arg(100);

void BM_Sdr(benchmark::State& state) {
  const auto obs = instance(state.range(0), static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(edm::sdr_complete_edm(obs, 2));
}
BENCHMARK(BM_Sdr)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
