#include "bineg/binegativity.hpp"
#include "bineg/certificates.hpp"
#include "bineg/eig.hpp"
#include "bineg/normal_form.hpp"
#include "bineg/rng.hpp"
#include "bineg/states.hpp"

#include <benchmark/benchmark.h>

#include <limits>

using namespace bineg;

namespace {

EnsembleSpec hs_spec(int da, int db) {
    EnsembleSpec spec;
    spec.dim_a = da;
    spec.dim_b = db;
    spec.kind = EnsembleKind::HilbertSchmidt;
    spec.seed = 42;
    spec.count = 1;
    return spec;
}

void bm_eig(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const EnsembleSpec spec = hs_spec(n == 4 ? 2 : 3, n == 4 ? 2 : 3);
    const ComplexMatrix h = random_state(spec, 0).op.mat;
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(bm_eig)->Arg(4)->Arg(9);

void bm_binegativity(benchmark::State& state) {
    const DensityMatrix dm = random_state(hs_spec(2, 2), 0);
    for (auto _ : state) benchmark::DoNotOptimize(binegativity(dm));
}
BENCHMARK(bm_binegativity);

void bm_normal_form(benchmark::State& state) {
    const DensityMatrix dm = random_state(hs_spec(2, 2), 0);
    for (auto _ : state) benchmark::DoNotOptimize(filter_normal_form(dm.op));
}
BENCHMARK(bm_normal_form);

void bm_certify(benchmark::State& state) {
    const EnsembleSpec spec = hs_spec(2, 2);
    long i = 0;
    DensityMatrix dm = random_state(spec, i);
    while (summary(dm).is_ppt) dm = random_state(spec, ++i);
    for (auto _ : state) benchmark::DoNotOptimize(certify(dm));
}
BENCHMARK(bm_certify);

void bm_random_state(benchmark::State& state) {
    EnsembleSpec spec = hs_spec(2, 2);
    spec.count = std::numeric_limits<long>::max();
    long i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(random_state(spec, i++));
}
BENCHMARK(bm_random_state);

} // namespace

BENCHMARK_MAIN();
