#include <benchmark/benchmark.h>

#include "pmblue/moments.hpp"
#include "pmblue/panel_grid.hpp"
#include "pmblue/simulation.hpp"
#include "pmblue/uniform.hpp"

using namespace pmblue;

static void BM_PmMeanAdaptive(benchmark::State& state) {
    const auto d = make_family("normal");
    MomentOptions o;
    o.use_cache = false;
    for (auto _ : state) benchmark::DoNotOptimize(pm_mean(d, static_cast<int>(state.range(0)), o));
}
BENCHMARK(BM_PmMeanAdaptive)->Arg(2)->Arg(50)->Arg(1000);

static void BM_MomentTableAdaptive(benchmark::State& state) {
    const auto d = make_family("logistic");
    MomentOptions o;
    o.method = MomentMethod::adaptive;
    o.use_cache = false;
    for (auto _ : state) benchmark::DoNotOptimize(pm_moments_table(d, static_cast<int>(state.range(0)), o));
}
BENCHMARK(BM_MomentTableAdaptive)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_MomentTablePanel(benchmark::State& state) {
    const auto d = make_family("logistic");
    for (auto _ : state) benchmark::DoNotOptimize(panel_moments_table(d, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_MomentTablePanel)->Arg(12)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_UniformSums(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(uniform_sums(static_cast<int>(state.range(0))));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UniformSums)->RangeMultiplier(10)->Range(100, 1000000)->Complexity(benchmark::oN);

static void BM_Philox(benchmark::State& state) {
    PhiloxCounter c{0, 0, 0, 0};
    const PhiloxKey k{0x12345678, 0x9abcdef0};
    for (auto _ : state) {
        c = philox4x32_10(c, k);
        benchmark::DoNotOptimize(c);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

static void BM_SimulationReplicates(benchmark::State& state) {
    SimulationConfig cfg;
    cfg.family = "negexp";
    cfg.reflected = true;
    cfg.n = 50;
    cfg.replicates = static_cast<std::uint64_t>(state.range(0));
    cfg.workers = 1;
    const auto spec = simulation_family(cfg);
    const auto est = prepare_estimators(spec, cfg.n, cfg.estimators, cfg.direction);
    for (auto _ : state) benchmark::DoNotOptimize(run_simulation(cfg, est));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulationReplicates)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
