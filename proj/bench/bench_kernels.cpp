#include <benchmark/benchmark.h>

#include "mmc/consistency.hpp"
#include "mmc/corpus.hpp"
#include "mmc/polytope.hpp"

namespace {

using namespace mmc;

void BM_EpigraphVertices(benchmark::State& state) {
  const HPolytope p = epigraph_polytope(chain_loss(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices(p));
}

void BM_EpigraphVerticesSerial(benchmark::State& state) {
  const HPolytope p = epigraph_polytope(chain_loss(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices_serial(p));
}

void BM_TransportVertices(benchmark::State& state) {
  const HPolytope p = transport_polytope(SimplexPoint::barycenter(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices(p));
}

void BM_TransportVerticesSerial(benchmark::State& state) {
  const HPolytope p = transport_polytope(SimplexPoint::barycenter(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices_serial(p));
}

void BM_Oracle(benchmark::State& state) {
  const LossMatrix l = zero_one_loss(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle(l));
}

void BM_OracleSerial(benchmark::State& state) {
  const LossMatrix l = zero_one_loss(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle_serial(l));
}

}  // namespace

BENCHMARK(BM_EpigraphVertices)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpigraphVerticesSerial)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransportVertices)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransportVerticesSerial)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
