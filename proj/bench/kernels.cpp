#include <benchmark/benchmark.h>

#include "slam/classify.hpp"
#include "slam/fixtures.hpp"
#include "slam/homsolver.hpp"
#include "slam/polymorph.hpp"

using namespace slam;

namespace {

execution policy(const benchmark::State& state) { return state.range(0) ? execution::parallel : execution::serial; }

void BM_IndicatorImage(benchmark::State& state) {
    auto b = fixtures::hornsat();
    auto ind = indicator_structure(b, minor_condition::absorptive(2, 3), default_dense_cap, execution::serial);
    for (auto _ : state)
        benchmark::DoNotOptimize(indicator_relation_image(b.rel("H"), 2, 6, ind.class_of, policy(state)));
}
BENCHMARK(BM_IndicatorImage)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_BruteForceSearch(benchmark::State& state) {
    auto b = fixtures::transitive_tournament(3);
    for (auto _ : state)
        benchmark::DoNotOptimize(brute_force_search(b, minor_condition::quasi_maltsev(), 64, policy(state)));
}
BENCHMARK(BM_BruteForceSearch)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_SweepInstances(benchmark::State& state) {
    auto b = fixtures::path(3);
    hom_solver solver(b);
    auto test = [&](const structure& a) { return !solver.exists(a); };
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_instances(b.sig(), 4, test, policy(state)));
}
BENCHMARK(BM_SweepInstances)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
