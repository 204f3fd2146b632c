// Parallel against serial paths of the data-parallel kernels.

#include "edgechain/edgeworth/expansion.hpp"
#include "edgechain/oracle/ck.hpp"
#include "edgechain/oracle/monte_carlo.hpp"
#include "edgechain/parametrix/chain.hpp"
#include "edgechain/parametrix/series.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace edgechain;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

ModelPtr mixture(int steps) {
    auto m = std::make_shared<ModelSpec>();
    m->covariance = Coefficient::sine_x(1.0, 0.2, 1.0);
    m->innovations = modulated_mixture_family(m->covariance, 1.2, 0.3, 0.15, 1.0);
    m->steps = steps;
    return m;
}

ModelPtr exponential(int steps) {
    auto m = std::make_shared<ModelSpec>();
    m->covariance = Coefficient::tanh_x(1.0, 0.2, 1.0);
    m->innovations = centered_exponential_family(m->covariance);
    m->steps = steps;
    return m;
}

void ck_mixture(benchmark::State& state) {
    const ModelPtr m = mixture(32);
    const ChainAxis axis = make_chain_axis(*m, {0.0}, 4, 9);
    for (auto _ : state) benchmark::DoNotOptimize(ck_chain_density(*m, 32, 0.0, axis, 1e-8, mode(state)));
}

void ck_exponential(benchmark::State& state) {
    const ModelPtr m = exponential(16);
    const ChainAxis axis = make_chain_axis(*m, {0.0}, 4, 9);
    for (auto _ : state) benchmark::DoNotOptimize(ck_chain_density(*m, 16, 0.0, axis, 1e-8, mode(state)));
}

void chain_series(benchmark::State& state) {
    const ModelPtr m = mixture(8);
    QuadratureSpec q;
    q.series_rmax = 8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(parametrix_p_h_batch(m, 0, 8, {-0.5, 0.0, 0.5}, {0.1, 0.1, 0.1}, q, mode(state)));
    }
}

void backward_tables(benchmark::State& state) {
    const ModelPtr m = mixture(16);
    const QuadratureSpec q;
    for (auto _ : state) benchmark::DoNotOptimize(build_backward_chain(m, 0.0, 1.0, 0.2, 2, q, mode(state)));
}

void monte_carlo(benchmark::State& state) {
    const ModelPtr m = mixture(16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_chain_density(*m, 16, 0.0, {-0.5, 0.0, 0.5}, 100000, 0.0, 3, mode(state)));
    }
}

}  // namespace

BENCHMARK(ck_mixture)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(ck_exponential)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(chain_series)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(backward_tables)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(monte_carlo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
