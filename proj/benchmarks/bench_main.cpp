#include "treecouple/broadcast.hpp"
#include "treecouple/coupling.hpp"
#include "treecouple/oracle.hpp"
#include "treecouple/walks.hpp"

#include <benchmark/benchmark.h>

using namespace treecouple;

static void BM_SampleBroadcast(benchmark::State& st) {
  const TreeShape shape{static_cast<std::uint32_t>(st.range(0)), static_cast<std::uint32_t>(st.range(1))};
  Rng rng(1);
  for (auto _ : st)
    benchmark::DoNotOptimize(broadcast::sample_broadcast(shape, 10, 1, rng));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(tree_model::vertex_count(shape)));
}
BENCHMARK(BM_SampleBroadcast)->Args({2, 12})->Args({10, 4})->Args({100, 2});

static void BM_NaiveBlock(benchmark::State& st) {
  const auto d = static_cast<std::uint32_t>(st.range(0)), k = static_cast<std::uint32_t>(st.range(1));
  Rng rng(2);
  for (auto _ : st)
    benchmark::DoNotOptimize(coupling::naive_block({1, 2}, d, k, rng));
}
BENCHMARK(BM_NaiveBlock)->Args({20, 11})->Args({100, 60});

static void BM_ImprovedBlock(benchmark::State& st) {
  const auto d = static_cast<std::uint32_t>(st.range(0)), k = static_cast<std::uint32_t>(st.range(1));
  Rng rng(3);
  for (auto _ : st)
    benchmark::DoNotOptimize(coupling::improved_block({1, 2}, d, k, rng));
}
BENCHMARK(BM_ImprovedBlock)->Args({20, 11})->Args({100, 60})->Args({200, 100});

static void BM_DisagreementProfile(benchmark::State& st) {
  const TreeShape shape{100, static_cast<std::uint32_t>(st.range(0))};
  Rng rng(4);
  for (auto _ : st)
    benchmark::DoNotOptimize(coupling::disagreement_profile(shape, 60, 1, 2, CouplingKind::Improved, rng));
}
BENCHMARK(BM_DisagreementProfile)->Arg(2)->Arg(4);

static void BM_SMatrixRun(benchmark::State& st) {
  Rng rng(5);
  for (auto _ : st)
    benchmark::DoNotOptimize(walks::s_matrix_run(static_cast<std::size_t>(st.range(0)), 10, rng));
}
BENCHMARK(BM_SMatrixRun)->Arg(1000)->Arg(100000);

static void BM_AbsorbedWalkDp(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(walks::absorbed_walk_dp({static_cast<std::uint32_t>(st.range(0))}));
}
BENCHMARK(BM_AbsorbedWalkDp)->Arg(10)->Arg(100)->Arg(400);

static void BM_EnumerateMeasure(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(oracle::enumerate_measure({2, 2}, static_cast<std::uint32_t>(st.range(0)), 1));
}
BENCHMARK(BM_EnumerateMeasure)->Arg(4)->Arg(8);
BENCHMARK_MAIN();
