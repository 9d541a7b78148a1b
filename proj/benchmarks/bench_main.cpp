#include <benchmark/benchmark.h>

#include "m2m/dimensioning.hpp"
#include "m2m/estimator.hpp"
#include "m2m/occupancy.hpp"
#include "m2m/reliability.hpp"
#include "m2m/rng.hpp"
#include "m2m/sim.hpp"

namespace {

using namespace m2m;

const EstimatorConfig kEstimator{0.001, 1.056, 54, 60000};

void BM_EstimationRao(benchmark::State& state) {
    Rng rng(1);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_estimation_rao(n, kEstimator, rng));
    }
}
BENCHMARK(BM_EstimationRao)->Arg(1000)->Arg(30000);

void BM_Estimate(benchmark::State& state) {
    Rng rng(2);
    const auto obs = simulate_estimation_rao(static_cast<int>(state.range(0)), kEstimator, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate(obs, kEstimator));
    }
}
BENCHMARK(BM_Estimate)->Arg(1000)->Arg(30000);

void BM_ExactSuccessPmf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(detail::exact_success_pmf(n, 1080));
    }
}
BENCHMARK(BM_ExactSuccessPmf)->Arg(50)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Reliability(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ContentionSpace space{optimal_split(n, 399, 54).s1, 399, 54};
    for (auto _ : state) {
        benchmark::DoNotOptimize(reliability(n, space));
    }
}
BENCHMARK(BM_Reliability)->Arg(100)->Arg(5000)->Arg(30000);

void BM_RequiredRaos(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(required_raos(n, 0.99, 54));
    }
}
BENCHMARK(BM_RequiredRaos)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_DimensionTwoClass(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(dimension_two_class(20000, 800, 0.99, 0.99, 4000, 54));
    }
}
BENCHMARK(BM_DimensionTwoClass)->Unit(benchmark::kMillisecond);

void BM_ProposedAccessFrameRun(benchmark::State& state) {
    TrafficScenario sc;
    sc.n1 = static_cast<int>(state.range(0));
    sc.activation_window_s = 10.0;
    sc.tau1_s = 10.0;
    sc.n2 = 10000;
    sc.tc2_arrival_horizon_s = 15.0;
    sc.horizon_s = 40.0;
    ProposedOptions opts;
    opts.l = 4000;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Rng rng(++seed);
        benchmark::DoNotOptimize(run_proposed(sc, ArpParams{}, opts, rng));
    }
}
BENCHMARK(BM_ProposedAccessFrameRun)->Arg(30000)->Unit(benchmark::kMillisecond);

void BM_LegacyCollapseRun(benchmark::State& state) {
    TrafficScenario sc;
    sc.n1 = 5000;
    sc.activation_window_s = 0.01;
    sc.burst_start_s = 0.1;
    sc.tau1_s = 1.0;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Rng rng(++seed);
        benchmark::DoNotOptimize(run_legacy_dynamic(sc, ArpParams{}, LegacyOptions{}, rng));
    }
}
BENCHMARK(BM_LegacyCollapseRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
