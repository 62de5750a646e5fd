// parallel kernels against their serial references
#include "bell/families.hpp"
#include "bell/local.hpp"
#include "bell/quantum.hpp"

#include <benchmark/benchmark.h>

using namespace bell;

static void BM_lhv_parallel(benchmark::State& st) {
    Functional f = i3322(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(lhv_bound(f).saturating_count);
}
static void BM_lhv_reference(benchmark::State& st) {
    Functional f = i3322(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(lhv_bound_reference(f).saturating_count);
}
BENCHMARK(BM_lhv_parallel)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lhv_reference)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_tight(benchmark::State& st) {
    Functional f = i3322(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(is_tight(f).affine_rank);
}
BENCHMARK(BM_tight)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_seesaw_parallel(benchmark::State& st) {
    SeesawOptions o;
    o.restarts = 16;
    Functional f = eq13();
    for (auto _ : st) benchmark::DoNotOptimize(seesaw(f, 2, o).value);
}
static void BM_seesaw_serial(benchmark::State& st) {
    SeesawOptions o;
    o.restarts = 16;
    Functional f = eq13();
    for (auto _ : st) benchmark::DoNotOptimize(seesaw_serial(f, 2, o).value);
}
BENCHMARK(BM_seesaw_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_seesaw_serial)->Unit(benchmark::kMillisecond);

static void BM_sweep_parallel(benchmark::State& st) {
    auto g = interior_grid(40);
    Functional f = mabk(3);
    for (auto _ : st) benchmark::DoNotOptimize(ghz_sweep(f, g).size());
}
static void BM_sweep_serial(benchmark::State& st) {
    auto g = interior_grid(40);
    Functional f = mabk(3);
    for (auto _ : st) benchmark::DoNotOptimize(ghz_sweep_serial(f, g).size());
}
BENCHMARK(BM_sweep_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
