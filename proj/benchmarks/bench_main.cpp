#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "spherent/dynamics.hpp"
#include "spherent/microsphere.hpp"
#include "spherent/special_functions.hpp"
#include "spherent/steady_state.hpp"

using namespace spherent;

namespace {

SphereSystem fig2() {
    SphereSystem s;
    s.material = {0.5, 1e-6};
    s.radius = 10.0;
    s.delta_r = 0.14;
    s.theta = std::numbers::pi;
    return s;
}

CouplingParams generic() {
    CouplingParams p;
    p.gamma31_aa = 2.0;
    p.gamma31_ab = 0.7;
    p.gamma32_aa = 1.0;
    p.gamma32_ab = 0.3;
    p.delta_omega_c = 0.3;
    p.detuning = 0.2;
    return p;
}

void BM_BesselTable(benchmark::State& state) {
    const int lmax = static_cast<int>(state.range(0));
    const cplx z{70.0, 1e-3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(spherical_j_table(lmax, z));
        benchmark::DoNotOptimize(spherical_h1_table(lmax, z));
    }
}
BENCHMARK(BM_BesselTable)->Arg(100)->Arg(500)->Arg(2000);

void BM_CollectiveRates(benchmark::State& state) {
    SphereSystem s = fig2();
    s.delta_r = state.range(0) / 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(collective_rates(s, 1.0501));
    }
}
BENCHMARK(BM_CollectiveRates)->Arg(3)->Arg(14)->Arg(100);

void BM_ResonanceSearch(benchmark::State& state) {
    const SphereSystem s = fig2();
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_resonances(s, 1.0495, 1.0507, 100, 140));
    }
}
BENCHMARK(BM_ResonanceSearch)->Unit(benchmark::kMillisecond);

void BM_AmplitudeClosed(benchmark::State& state) {
    const CouplingParams p = generic();
    const DriveSpec d{{1.0, 0.0}, {0.5, 0.0}};
    const auto times = uniform_times(50.0, 50.0 / 4000.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trajectory_closed(p, d, times));
    }
}
BENCHMARK(BM_AmplitudeClosed);

void BM_Volterra(benchmark::State& state) {
    const CouplingParams p = generic();
    const DriveSpec d{{1.0, 0.0}, {0.5, 0.0}};
    const double step = volterra_max_step(p, Branch::Plus);
    const double t_max = step * static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(amplitude_volterra(p, d, Branch::Plus, t_max, step));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Volterra)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNSquared)->Unit(benchmark::kMillisecond);

void BM_SteadyStateExact(benchmark::State& state) {
    const CouplingParams p = generic();
    const DriveSpec d{{1.0, 0.0}, {0.5, 0.2}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(steady_state_exact(p, d));
    }
}
BENCHMARK(BM_SteadyStateExact);

void BM_Concurrence(benchmark::State& state) {
    const SteadyState s{0.6, 0.2, {0.05, 0.02}};
    const bool oracle = state.range(0) != 0;
    const TwoQubitDensity rho = assemble_density(s);
    for (auto _ : state) {
        if (oracle) {
            benchmark::DoNotOptimize(concurrence_oracle(rho));
        } else {
            benchmark::DoNotOptimize(concurrence_paper(s));
        }
    }
}
BENCHMARK(BM_Concurrence)->Arg(0)->Arg(1);

}  // namespace
BENCHMARK_MAIN();
