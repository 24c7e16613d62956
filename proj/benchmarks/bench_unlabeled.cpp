#include "edmkit/random.hpp"
#include "edmkit/unlabeled.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

edm::RoomSpec room() {
  Eigen::Matrix3Xd mics(3, 5);
  mics << 2.0, 2.4, 2.1, 1.8, 2.2,
          1.5, 1.6, 1.9, 1.7, 1.4,
          1.2, 1.1, 1.4, 1.3, 1.6;
  return edm::RoomSpec(edm::Vec3(5.0, 4.0, 3.0), edm::Vec3(3.5, 2.5, 1.7), mics);
}

void BM_SstressAugmented(benchmark::State& state) {
  const edm::RoomSpec r = room();
  const edm::PointSet mics(edm::Matrix(r.microphones()));
  const edm::DistanceMatrix d = edm::assemble_edm(mics);
  edm::Vector dv(5);
  for (edm::Index i = 0; i < 5; ++i) dv(i) = (r.source() - r.microphones().col(i)).squaredNorm();
  for (auto _ : state) benchmark::DoNotOptimize(edm::sstress_augmented(d, dv));
}
BENCHMARK(BM_SstressAugmented);

void BM_SortEchoes(benchmark::State& state) {
  const edm::RoomSpec r = room();
  const auto sim = edm::simulate_echoes(r, 1, 0.0, static_cast<int>(state.range(0)), 9);
  const edm::PointSet mics(edm::Matrix(r.microphones()));
  for (auto _ : state) benchmark::DoNotOptimize(edm::sort_echoes(mics, sim.echoes));
}
BENCHMARK(BM_SortEchoes)->Arg(0)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Turnpike(benchmark::State& state) {
  edm::Rng rng(10);
  std::vector<double> pts;
  for (int i = 0; i < state.range(0); ++i) pts.push_back(edm::uniform01(rng));
  std::vector<double> values;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) values.push_back(std::abs(pts[i] - pts[j]));
  }
  const edm::DistanceMultiset set(values);
  for (auto _ : state) benchmark::DoNotOptimize(edm::turnpike_recover(set));
}
BENCHMARK(BM_Turnpike)->DenseRange(4, 10, 3);

}  // namespace
