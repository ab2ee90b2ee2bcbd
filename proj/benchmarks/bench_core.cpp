#include <benchmark/benchmark.h>

#include <random>

#include "ebc/analysis.hpp"
#include "ebc/delivery.hpp"
#include "ebc/gf256.hpp"
#include "ebc/linear_system.hpp"
#include "ebc/placement.hpp"

namespace ebc {
namespace {

void BM_GfAxpy(benchmark::State& state) {
  std::vector<std::uint8_t> dst(state.range(0), 1), src(state.range(0), 7);
  std::uint8_t c = 3;
  for (auto _ : state) {
    gf::axpy(dst, c++, src);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GfAxpy)->Arg(64)->Arg(1500);

void BM_EliminatorFullRank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 g(1);
  std::vector<std::vector<std::uint8_t>> rows(n + 4, std::vector<std::uint8_t>(n));
  for (auto& r : rows) {
    for (auto& x : r) x = static_cast<std::uint8_t>(g());
  }
  for (auto _ : state) {
    Eliminator e(n, 1);
    for (const auto& r : rows) e.insert(r, {static_cast<std::uint8_t>(r[0])});
    benchmark::DoNotOptimize(e.solve());
  }
}
BENCHMARK(BM_EliminatorFullRank)->Arg(32)->Arg(128);

void BM_PhasePlan(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  SystemConfig c = symmetric_config(K, K, .4, 1, 1000);
  for (int k = 0; k < K; ++k) c.delta[k] = 0.1 + 0.8 * k / K;
  for (auto _ : state) benchmark::DoNotOptimize(phase_plan(c, Demand::identity(K), {false}).total);
}
BENCHMARK(BM_PhasePlan)->DenseRange(6, 10, 2);

void BM_Delivery(benchmark::State& state, SimMode mode, std::int64_t F) {
  SystemConfig c = symmetric_config(4, 4, .3, 1, F);
  PlacementMap pm = decentralized_place(c, 1);
  SimOptions o;
  o.mode = mode;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_delivery(c, pm, Demand::identity(4), seed++, o));
}
BENCHMARK_CAPTURE(BM_Delivery, count_F1e5, SimMode::kCount, 100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Delivery, exact_F200, SimMode::kExact, 200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ebc

BENCHMARK_MAIN();
