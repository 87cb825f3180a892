#include <cstdint>

#include <benchmark/benchmark.h>

#include "fptmc/chain.hpp"
#include "fptmc/io.hpp"
#include "fptmc/mc.hpp"
#include "fptmc/oracle.hpp"
#include "fptmc/rng.hpp"
#include "fptmc/sampling.hpp"

namespace {

const char* const kBugCounts = R"(states: Egg N1 N2 N3 N4 N5 Adult
Egg: to_Egg=478, to_N1=139, absorb=59
N1: to_N1=528, to_N2=89, absorb=52
N2: to_N2=301, to_N3=74, absorb=15
N3: to_N3=392, to_N4=60, absorb=14
N4: to_N4=405, to_N5=59, absorb=1
N5: to_N5=853, to_Adult=55, absorb=4
Adult: to_Adult=2515, absorb=55
)";

fptmc::TransitionCountTable bug_table() { return fptmc::parse_counts(kBugCounts); }

void BM_PassageTimeMoments(benchmark::State& state) {
    const auto spec = bug_table().point_estimate();
    for (auto _ : state) {
        const auto moments = fptmc::passage_time_moments(spec);
        benchmark::DoNotOptimize(moments.mean);
    }
}
BENCHMARK(BM_PassageTimeMoments);

void BM_FundamentalMatrix(benchmark::State& state) {
    const auto spec = bug_table().point_estimate();
    for (auto _ : state) {
        const auto n = fptmc::fundamental_matrix(spec);
        benchmark::DoNotOptimize(n(0, 0));
    }
}
BENCHMARK(BM_FundamentalMatrix);

void BM_SampleMatrix(benchmark::State& state) {
    const auto table = bug_table();
    fptmc::RngStream rng(1, 0);
    for (auto _ : state) {
        const auto spec = fptmc::sample_matrix(table, 1.0, rng);
        benchmark::DoNotOptimize(spec.transitions(0, 0));
    }
}
BENCHMARK(BM_SampleMatrix);

void BM_Binomial(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    fptmc::RngStream rng(2, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fptmc::sample_binomial(n, 0.3, rng));
    }
}
BENCHMARK(BM_Binomial)->Arg(64)->Arg(2570)->Arg(257000);

void BM_RunMcReplicates(benchmark::State& state) {
    const auto table = bug_table();
    fptmc::McConfig cfg;
    cfg.replicates = static_cast<std::uint64_t>(state.range(0));
    cfg.seed = 3;
    for (auto _ : state) {
        const auto result = fptmc::run_mc(table, fptmc::point_mass(7, 0), cfg);
        benchmark::DoNotOptimize(result.var_L);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunMcReplicates)->Arg(1000)->Arg(10000);

void BM_Trajectory(benchmark::State& state) {
    const auto spec = bug_table().point_estimate();
    fptmc::RngStream rng(4, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fptmc::simulate_trajectory(spec, rng));
    }
}
BENCHMARK(BM_Trajectory);

}  // namespace

BENCHMARK_MAIN();
