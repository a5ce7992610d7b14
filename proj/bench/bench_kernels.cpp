// Serial reference vs OpenMP for the dense kernels. Run with
// --benchmark_filter=<name> to pick one; OMP_NUM_THREADS sets the team size.

#include <benchmark/benchmark.h>

#include "pcm/kernels.hpp"
#include "pcm/rng.hpp"

namespace {

pcm::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    pcm::Rng rng(seed);
    pcm::Matrix m(rows, cols);
    for (auto &v : m.data()) {
        v = rng.normal();
    }
    return m;
}

template <pcm::Matrix (*Kernel)(const pcm::Matrix &, const pcm::Matrix &)>
void square(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, n, 1);
    const auto b = random_matrix(n, n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(a, b));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

// rows of a against rows of b, 300 columns (embedding width)
template <pcm::Matrix (*Kernel)(const pcm::Matrix &, const pcm::Matrix &)>
void pairwise(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 300, 3);
    const auto b = random_matrix(n, 300, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(a, b));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

pcm::Matrix rbf_serial(const pcm::Matrix &a, const pcm::Matrix &b) { return pcm::kernels::serial::rbf_gram(a, b, 1.0 / 300); }
pcm::Matrix rbf_omp(const pcm::Matrix &a, const pcm::Matrix &b) { return pcm::kernels::omp::rbf_gram(a, b, 1.0 / 300); }

}  // namespace

BENCHMARK(square<pcm::kernels::serial::gemm>)->Name("gemm/serial")->RangeMultiplier(2)->Range(64, 256);
BENCHMARK(square<pcm::kernels::omp::gemm>)->Name("gemm/omp")->RangeMultiplier(2)->Range(64, 256);
BENCHMARK(pairwise<pcm::kernels::serial::sq_distances>)->Name("sq_distances/serial")->Range(128, 1024);
BENCHMARK(pairwise<pcm::kernels::omp::sq_distances>)->Name("sq_distances/omp")->Range(128, 1024);
BENCHMARK(pairwise<rbf_serial>)->Name("rbf_gram/serial")->Range(128, 1024);
BENCHMARK(pairwise<rbf_omp>)->Name("rbf_gram/omp")->Range(128, 1024);

BENCHMARK_MAIN();
