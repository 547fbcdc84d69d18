#include <benchmark/benchmark.h>

#include "qkdrates/schur_efm.hpp"
#include "qkdrates/schur_qubit.hpp"

using namespace qkdrates;

static void BM_MixEntropyZPair(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const BlochPair bp = make_bloch_pair(0.13, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(mix_entropy_z_pair(n, 0.5, 0.5, bp));
}
BENCHMARK(BM_MixEntropyZPair)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_SchurBasis(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int q = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(schur_basis(n, q).vectors.size());
}
BENCHMARK(BM_SchurBasis)->Args({3, 3})->Args({4, 3})->Args({3, 8})->Unit(benchmark::kMillisecond);

static void BM_BlockProject(benchmark::State& state) {
    const SchurBasis& basis = cached_schur_basis(3, 8);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(8, 8) / 8.0;
    rho(0, 1) = rho(1, 0) = 0.01;
    for (auto _ : state) benchmark::DoNotOptimize(block_project(basis, rho).size());
}
BENCHMARK(BM_BlockProject)->Unit(benchmark::kMillisecond);
