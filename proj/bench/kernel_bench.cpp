#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

#include "pathwise/kernels.hpp"
#include "pathwise/localtime.hpp"

using namespace pathwise;

namespace {

const Path& brownian() {
    static const Path path = brownian_path(1.0, kDefaultBrownianStep, 7);
    return path;
}

Partition partition_at(int level) { return lebesgue_partition(brownian(), Grid::dyadic(level), 1.0); }

std::vector<double> u_grid(const Partition& p) {
    const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
    std::vector<double> u;
    for (double x = std::floor(*lo / p.spacing) * p.spacing - p.spacing; x <= *hi + p.spacing; x += p.spacing) {
        u.push_back(x);
    }
    return u;
}

void field_reference(benchmark::State& state) {
    const Partition p = partition_at(static_cast<int>(state.range(0)));
    const std::vector<double> u = u_grid(p);
    std::vector<double> values, right;
    for (auto _ : state) {
        reference::field_values(p.values, u, values, right);
        benchmark::DoNotOptimize(values.data());
    }
    state.counters["cells"] = static_cast<double>(p.size() * u.size());
}

void field_kernel(benchmark::State& state) {
    const Partition p = partition_at(static_cast<int>(state.range(0)));
    const std::vector<double> u = u_grid(p);
    const int threads = static_cast<int>(state.range(1));
    omp_set_num_threads(threads);
    std::vector<double> values, right;
    for (auto _ : state) {
        kernels::field_values(p.values, u, values, right);
        benchmark::DoNotOptimize(values.data());
    }
    state.counters["cells"] = static_cast<double>(p.size() * u.size());
}

void distance_reference(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Partition coarse = partition_at(n - 1), fine = partition_at(n);
    for (auto _ : state) benchmark::DoNotOptimize(reference::uniform_distance(brownian(), coarse, fine));
}

void distance_kernel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Partition coarse = partition_at(n - 1), fine = partition_at(n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::uniform_distance(coarse, fine));
}

void profile_reference(benchmark::State& state) {
    const Partition p = partition_at(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::p_variation_profile(p, 3.0));
}

void profile_kernel(benchmark::State& state) {
    const Partition p = partition_at(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::p_variation_profile(p, 3.0));
    state.counters["rows_evaluated"] = static_cast<double>(kernels::last_profile_rows_evaluated());
    state.counters["rows"] = static_cast<double>(p.size());
}

}  // namespace

BENCHMARK(field_reference)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(field_kernel)
    ->ArgsProduct({{4, 6}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(distance_reference)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(distance_kernel)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(profile_reference)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(profile_kernel)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
