#include <benchmark/benchmark.h>

#include "qkdrates/capacity.hpp"
#include "qkdrates/keyrates.hpp"
#include "qkdrates/optimize.hpp"

using namespace qkdrates;

static void BM_Bb84Rate(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bb84_rate(m, 0.12, 0.3).rate);
}
BENCHMARK(BM_Bb84Rate)->Arg(1)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_SixStateRate(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sixstate_rate(m, 0.14, 0.3).rate);
}
BENCHMARK(BM_SixStateRate)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_IteratedRate(benchmark::State& state) {
    const int m2 = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bb84_iter_rate(3, m2, 0.12, 0.25, 0.02).rate);
}
BENCHMARK(BM_IteratedRate)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ConcRate(benchmark::State& state) {
    const int m1 = static_cast<int>(state.range(0));
    const int m2 = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(conc_rate({m1, m2, depolarizing(0.1905)}));
}
BENCHMARK(BM_ConcRate)->Args({5, 1})->Args({3, 19})->Args({5, 10})->Unit(benchmark::kMillisecond);

static void BM_PmaxBb84(benchmark::State& state) {
    PmaxQuery query;
    query.m = static_cast<int>(state.range(0));
    query.mode.q = 0.25;
    for (auto _ : state) benchmark::DoNotOptimize(pmax_search(query));
}
BENCHMARK(BM_PmaxBb84)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_MaximizeQ(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(maximize_q([](double q) { return bb84_rate(5, 0.12, q).rate; }).best_value);
}
BENCHMARK(BM_MaximizeQ)->Unit(benchmark::kMillisecond);
