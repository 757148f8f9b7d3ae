#include <benchmark/benchmark.h>

#include <random>

#include "connectgraph/eigen.hpp"
#include "connectgraph/experiments.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/sbm.hpp"

using namespace connectgraph;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(r, c);
    for (double& v : m.data()) v = u(rng);
    return m;
}

Matrix sbm_matrix(int n) {
    return sample_adjacency({2, 2, n, 0.6, 0.4, 0.3, 0.1}, 1).adjacency;
}

void BM_MatmulSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::matmul(a, b));
}

void BM_MatmulParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    kernels::set_threads(static_cast<int>(state.range(1)));
    const Matrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::matmul(a, b));
}

void BM_Rank2UpdateSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Matrix a = random_matrix(n, n, 3);
    const Vector v(n, 1e-9), w(n, 1e-9);
    for (auto _ : state) kernels::serial::trailing_rank2_update(a, 0, v, w);
}

void BM_Rank2UpdateParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    kernels::set_threads(static_cast<int>(state.range(1)));
    Matrix a = random_matrix(n, n, 3);
    const Vector v(n, 1e-9), w(n, 1e-9);
    for (auto _ : state) kernels::trailing_rank2_update(a, 0, v, w);
}

void BM_EigenJacobi(benchmark::State& state) {
    const Matrix a = sbm_matrix(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigensystem(a));
}

void BM_EigenTridiagonalQL(benchmark::State& state) {
    kernels::set_threads(static_cast<int>(state.range(1)));
    const Matrix a = sbm_matrix(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigensystem(a));
}

void BM_TopEigenpairs(benchmark::State& state) {
    kernels::set_threads(static_cast<int>(state.range(1)));
    const Matrix a = sbm_matrix(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(top_eigenpairs(a, 3));
}

void BM_Sweep(benchmark::State& state) {
    kernels::set_threads(static_cast<int>(state.range(0)));
    SweepSpec spec;
    spec.base = {2, 2, 40, 0.6, 0.4, 0.3, 0.1};
    spec.vary = "alpha";
    spec.grid = linear_grid(0.15, 0.45, 4);
    spec.trials = 4;
    for (auto _ : state) benchmark::DoNotOptimize(sweep(spec));
}

}  // namespace

BENCHMARK(BM_MatmulSerial)->Arg(128)->Arg(384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatmulParallel)->Args({128, 1})->Args({384, 1})->Args({384, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rank2UpdateSerial)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Rank2UpdateParallel)->Args({1024, 1})->Args({1024, 4})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EigenJacobi)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenTridiagonalQL)->Args({25, 1})->Args({50, 1})->Args({100, 1})->Args({100, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopEigenpairs)->Args({100, 1})->Args({100, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
