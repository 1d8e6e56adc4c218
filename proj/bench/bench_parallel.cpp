// Serial reference vs OpenMP implementation of the two parallel kernels:
// Monte Carlo growth (parallel over trials) and MAJ/RSK shape polynomials
// (parallel over first-entry blocks of S(n)). The thread count is the second
// argument of the parallel variants.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "qpl/growth.hpp"
#include "qpl/rsk.hpp"

namespace {

void BM_McSerial(benchmark::State& state)
{
    const int boxes = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qpl::mc_limit_experiment_serial(boxes, qpl::QParam(0.5), 16, 3, 1));
    state.SetItemsProcessed(state.iterations() * 16 * boxes);
}

void BM_McParallel(benchmark::State& state)
{
    const int boxes = static_cast<int>(state.range(0));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(qpl::mc_limit_experiment(boxes, qpl::QParam(0.5), 16, 3, 1));
    state.SetItemsProcessed(state.iterations() * 16 * boxes);
}

void BM_ShapePolynomialsSerial(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qpl::maj_shape_polynomials_serial(n));
}

void BM_ShapePolynomialsParallel(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(qpl::maj_shape_polynomials(n));
}

}  // namespace

BENCHMARK(BM_McSerial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McParallel)->ArgsProduct({{1000, 4000}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShapePolynomialsSerial)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShapePolynomialsParallel)->ArgsProduct({{8, 9}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
