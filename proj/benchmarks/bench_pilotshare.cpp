#include <benchmark/benchmark.h>

#include <cmath>

#include "pilotshare/game.hpp"
#include "pilotshare/harness.hpp"

using namespace pilotshare;

namespace {

SystemParams make_params(std::size_t cells, int antennas) {
    SystemParams p;
    p.antennas = antennas;
    p.pilots = 10 * static_cast<int>(cells);
    p.frame_symbols = 400;
    p.snr = std::pow(10.0, 0.5);
    p.cells = cells;
    return p;
}

struct Fixture {
    Deployment dep;
    PropagationTable table;
    SystemParams params;

    explicit Fixture(std::size_t L, int antennas = 200)
        : dep(generate_deployment(L, 25.0, 7)),
          table(estimate_propagation(dep, 4000, 11)),
          params(make_params(L, antennas)) {}
};

void BM_CellUtility(benchmark::State& state) {
    const Fixture fx(static_cast<std::size_t>(state.range(0)));
    const CoalitionStructure c = CoalitionStructure::grand(fx.dep.cells());
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cell_utility(0, c, fx.params, fx.table, Scheme::ZFC));
    }
}
BENCHMARK(BM_CellUtility)->Arg(7)->Arg(20);

void BM_EnumeratePartitions(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        PartitionEnumerator en(L);
        CoalitionStructure c;
        std::size_t n = 0;
        while (en.next(c)) ++n;
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_EnumeratePartitions)->Arg(7)->Arg(10);

void BM_ExhaustiveOptimum(benchmark::State& state) {
    const Fixture fx(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            exhaustive_optimum(fx.params, fx.table, Scheme::MRC));
    }
}
BENCHMARK(BM_ExhaustiveOptimum);

void BM_RunFormation(benchmark::State& state) {
    const Fixture fx(static_cast<std::size_t>(state.range(0)));
    const std::vector<int> budgets(fx.dep.cells(), 100);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_formation(fx.params, fx.table, budgets, Scheme::MRC, ++seed));
    }
}
BENCHMARK(BM_RunFormation)->Arg(7)->Arg(20);

void BM_EstimatePropagation(benchmark::State& state) {
    const Deployment dep =
        generate_deployment(static_cast<std::size_t>(state.range(0)), 25.0, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_propagation(dep, 10000, 3));
    }
}
BENCHMARK(BM_EstimatePropagation)->Arg(7)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_OracleSe(benchmark::State& state) {
    const Fixture fx(7);
    const CoalitionStructure c(std::vector<int>{0, 1, 0, 2, 1, 2, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle_se(0, c, fx.params, fx.dep, Scheme::ZFC,
                                           static_cast<std::size_t>(state.range(0)),
                                           99));
    }
}
BENCHMARK(BM_OracleSe)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
