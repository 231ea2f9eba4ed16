// Serial vs OpenMP timings for the grid kernels and the instance sweep.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "riccati/criteria.hpp"
#include "riccati/instances.hpp"
#include "riccati/integrate.hpp"
#include "riccati/sweep.hpp"
#include "riccati/verify.hpp"

using namespace riccati;

namespace {

Execution exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

const Instance& big_instance() {
    static const Instance inst = [] {
        InstanceSpec spec;
        spec.n = 8;
        spec.seed = 1;
        return generate(spec);
    }();
    return inst;
}

void BM_TheoremCheck(benchmark::State& state) {
    const Instance& inst = big_instance();
    const GridSpec grid = GridSpec::over(inst.cs, 2001);
    for (auto _ : state)
        benchmark::DoNotOptimize(check_theorem_3_1(inst.cs, inst.lambda, inst.Y0, grid, {}, exec_of(state)));
}

void BM_EigenMonitor(benchmark::State& state) {
    const Instance& inst = big_instance();
    IntegratorOptions opts;
    opts.num_samples = 2001;
    const auto traj = integrate_riccati_direct(inst.cs, inst.Y0, opts);
    for (auto _ : state) benchmark::DoNotOptimize(eigen_monitor(traj, inst.lambda, exec_of(state)));
}

void BM_GuaranteeSweep(benchmark::State& state) {
    std::vector<InstanceSpec> specs;
    for (int k = 0; k < 16; ++k) {
        InstanceSpec s;
        s.seed = static_cast<std::uint64_t>(k);
        s.n = 1 + k % 4;
        specs.push_back(s);
    }
    for (auto _ : state) benchmark::DoNotOptimize(guarantee_sweep(specs, {}, exec_of(state)));
}

} // namespace

BENCHMARK(BM_TheoremCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenMonitor)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GuaranteeSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
