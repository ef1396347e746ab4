// Serial reference kernels against their OpenMP counterparts.

#include "stochcirc/approximations.hpp"
#include "stochcirc/dilation.hpp"
#include "stochcirc/ensemble.hpp"
#include "stochcirc/verify.hpp"

#include <benchmark/benchmark.h>

using namespace stochcirc;

namespace {

const WienerDilation& dilation() {
    static const WienerDilation d = [] {
        CircuitSpec s;
        s.capacitance = ScalarFunction::constant(1.0);
        s.resistance = ScalarFunction::constant(0.2);
        s.memristance = ScalarFunction::constant(0.3);
        return build_wiener_dilation(PhaseSpaceModel::from_spec(s));
    }();
    return d;
}

const TrajectoryStore& store() {
    static const TrajectoryStore s =
        simulate_ensemble(dilation().system, Vec2(1, 1), 0.5, 0.01, 20000, 1, Scheme::euler_maruyama);
    return s;
}

Vec2 target(double, const Vec2& x) { return Vec2(x(1), -x(0) - 0.5 * x(1)); }

void BM_EnsembleSerial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            simulate_ensemble_serial(dilation().system, Vec2(1, 1), 0.5, 0.01, 2000, 1, Scheme::heun));
}

void BM_EnsembleParallel(benchmark::State& state) {
    EnsembleOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            simulate_ensemble(dilation().system, Vec2(1, 1), 0.5, 0.01, 2000, 1, Scheme::heun, opts));
}

void BM_DriftSerial(benchmark::State& state) {
    (void)store();
    for (auto _ : state) benchmark::DoNotOptimize(empirical_drift_serial(store(), target));
}

void BM_DriftParallel(benchmark::State& state) {
    EstimatorOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    (void)store();
    for (auto _ : state) benchmark::DoNotOptimize(empirical_drift(store(), target, opts));
}

void BM_CltSerial(benchmark::State& state) {
    AssemblyParams params;
    params.marginal = Marginal::uniform;
    CltOptions opts;
    opts.horizon = 8;
    for (auto _ : state) benchmark::DoNotOptimize(clt_tests_serial(16, params, 7, opts));
}

void BM_CltParallel(benchmark::State& state) {
    AssemblyParams params;
    params.marginal = Marginal::uniform;
    CltOptions opts;
    opts.horizon = 8;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(clt_tests(16, params, 7, opts));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DriftSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DriftParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CltSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CltParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
