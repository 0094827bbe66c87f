#include <benchmark/benchmark.h>

#include "lqcp/estimate.hpp"
#include "lqcp/intervals.hpp"
#include "lqcp/simgen.hpp"
#include "lqcp/sntest.hpp"
#include "lqcp/ustat.hpp"

using namespace lqcp;

namespace {

DataMatrix gaussian(std::size_t n, std::size_t p) { return gen_gaussian(n, p, CovarianceSpec::identity(), 1); }

void BM_UStat(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DataMatrix x = gaussian(n, 100);
  const EvenOrder q(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(u_stat(x, q, n / 2, 1, n));
}
BENCHMARK(BM_UStat)->Args({200, 2})->Args({200, 6});

void BM_SnStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DataMatrix x = gaussian(n, static_cast<std::size_t>(state.range(1)));
  const EvenOrder q(static_cast<int>(state.range(2)));
  for (auto _ : state) benchmark::DoNotOptimize(sn_statistic(x, q).value);
}
BENCHMARK(BM_SnStatistic)->Args({200, 100, 2})->Args({200, 100, 6})->Args({400, 100, 2})->Unit(benchmark::kMicrosecond);

void BM_ScanStatistic(benchmark::State& state) {
  const DataMatrix x = gaussian(200, 50);
  for (auto _ : state) benchmark::DoNotOptimize(scan_statistic(x, EvenOrder(2), 1));
}
BENCHMARK(BM_ScanStatistic)->Unit(benchmark::kMillisecond);

void BM_WbsScoring(benchmark::State& state) {
  const DataMatrix x = gaussian(120, 50);
  const auto intervals = draw_intervals(120, static_cast<std::size_t>(state.range(0)), 23, 3);
  for (auto _ : state) benchmark::DoNotOptimize(score_intervals(x, QSet{2, 6}, intervals));
}
BENCHMARK(BM_WbsScoring)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
