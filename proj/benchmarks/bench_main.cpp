#include <benchmark/benchmark.h>

#include "ringsphere/model.hpp"
#include "ringsphere/oracle.hpp"
#include "ringsphere/spectrum.hpp"
#include "ringsphere/wavefunction.hpp"

namespace {

ringsphere::ModelParams canonical_ring() {
    ringsphere::ModelParams p;
    p.geometry.a = 10.0;
    p.confinement = {1.0, 1.0};
    p.fields = {1.0, 0.3};
    return p;
}

void bm_oracle_energy(benchmark::State& state) {
    const auto p = canonical_ring();
    ringsphere::OracleGrid grid;
    grid.richardson_levels = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ringsphere::oracle_energy(p, {0, 2}, grid));
}
BENCHMARK(bm_oracle_energy)->Arg(1)->Arg(2)->Arg(3);

void bm_enumerate_states(benchmark::State& state) {
    const auto p = canonical_ring();
    ringsphere::EnumerationOptions opts;
    opts.m_min = -static_cast<int>(state.range(0));
    opts.m_max = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ringsphere::enumerate_states(p, opts));
}
BENCHMARK(bm_enumerate_states)->Arg(4)->Arg(16);

void bm_normalize_profile(benchmark::State& state) {
    const auto p = canonical_ring();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ringsphere::normalized_profile(p, {n, 2}));
}
BENCHMARK(bm_normalize_profile)->Arg(0)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
