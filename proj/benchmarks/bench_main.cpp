#include <benchmark/benchmark.h>

#include "syncq/drift.hpp"
#include "syncq/monte_carlo.hpp"
#include "syncq/random.hpp"
#include "syncq/series.hpp"

namespace {

void BM_RdExact(benchmark::State& state) {
  const auto n = state.range(0);
  const syncq::Rational p(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(syncq::rd_exact(n, 3, p));
}
BENCHMARK(BM_RdExact)->Arg(100)->Arg(500)->Arg(2000);

void BM_RdLog(benchmark::State& state) {
  const auto n = state.range(0);
  const syncq::Rational p(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(syncq::rd_log(n, 3, p));
}
BENCHMARK(BM_RdLog)->Arg(100)->Arg(2000)->Arg(1'000'000);

void BM_PhiloxU32(benchmark::State& state) {
  syncq::RandomStream stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_u32());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxU32);

void BM_BernoulliThird(benchmark::State& state) {
  syncq::RandomStream stream(1, 0);
  const syncq::BernoulliSampler coin(syncq::Rational(1, 3));
  for (auto _ : state) benchmark::DoNotOptimize(coin(stream));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BernoulliThird);

void BM_DriftScan(benchmark::State& state) {
  const double radius = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(syncq::drift_scan(radius));
}
BENCHMARK(BM_DriftScan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SimulateGreedy(benchmark::State& state) {
  const auto params = syncq::SystemParams::make(3, syncq::Rational(1, 3), syncq::Rational(1, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(syncq::simulate_queue(params, syncq::PolicyKind::kGreedy, 100000, 1));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimulateGreedy)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
