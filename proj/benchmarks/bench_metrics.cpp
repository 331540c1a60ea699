#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ledgernet/baseline/erdos_renyi.hpp"
#include "ledgernet/graph.hpp"
#include "ledgernet/metrics/metrics.hpp"

using namespace ledgernet;

static void BM_GenerateGnm(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto g = baseline::generate_er_gnm({n, 4 * n, ++seed});
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * n));
}
BENCHMARK(BM_GenerateGnm)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_AddTransactions(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<Transaction> txs;
  txs.reserve(count);
  const std::uint64_t pool = count / 4 + 2;
  for (std::size_t i = 0; i < count; ++i) {
    txs.push_back(Transaction{AddressKey::canonicalize("a" + std::to_string(rng() % pool), Chain::bitcoin),
                              AddressKey::canonicalize("a" + std::to_string(rng() % pool), Chain::bitcoin),
                              Amount(rng() % 1000), 0, 0});
  }
  for (auto _ : state) {
    InteractionGraph g(Chain::bitcoin);
    for (const auto& tx : txs) g.add_transaction(tx);
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_AddTransactions)->Arg(10000)->Arg(100000);

static void BM_Clustering(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  auto g = baseline::generate_er_gnm({n, 4 * n, 7});
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::average_clustering(g, workers));
}
BENCHMARK(BM_Clustering)->Args({10000, 1})->Args({100000, 1})->Args({100000, 4});

static void BM_AnalyzeExact(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  auto g = baseline::generate_er_gnm({n, 4 * n, 7});
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::analyze(g, {workers}).main_component_aspl);
}
BENCHMARK(BM_AnalyzeExact)->Args({1000, 1})->Args({5000, 1})->Args({5000, 4})->Unit(benchmark::kMillisecond);

static void BM_AnalyzeSampled(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  auto g = baseline::generate_er_gnm({n, 4 * n, 7});
  for (auto _ : state) benchmark::DoNotOptimize(metrics::analyze(g, {1, 256, 3}).main_component_aspl);
}
BENCHMARK(BM_AnalyzeSampled)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
