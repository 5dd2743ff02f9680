#include <benchmark/benchmark.h>

#include "nuinarch/cir.hpp"
#include "nuinarch/estimate.hpp"
#include "nuinarch/rng.hpp"
#include "nuinarch/simulate.hpp"

namespace {

using namespace nuinarch;

void BM_Uniform(benchmark::State& state) {
    RngStream rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += rng.next_uniform();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Uniform);

void BM_Normal(benchmark::State& state) {
    RngStream rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += rng.next_normal();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Normal);

void BM_PoissonSmall(benchmark::State& state) {
    RngStream rng(1, 0);
    std::uint64_t acc = 0;
    for (auto _ : state) acc += poisson_draw(4.0, rng);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PoissonSmall);

void BM_PoissonLarge(benchmark::State& state) {
    RngStream rng(1, 0);
    std::uint64_t acc = 0;
    for (auto _ : state) acc += poisson_draw(5000.0, rng);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PoissonLarge);

void BM_SimulateSeries(benchmark::State& state) {
    const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        RngStream rng(7, stream++);
        const auto series =
            simulate_inarch(InarchParams{1.0, 0.998, 0}, n, rng);
        benchmark::DoNotOptimize(series.values.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SimulateSeries)->Arg(500)->Arg(5000);

void BM_ClsAlpha(benchmark::State& state) {
    RngStream rng(11, 0);
    const auto series = simulate_inarch(InarchParams{1.0, 0.99, 0}, 5000, rng);
    for (auto _ : state) {
        const auto fit = cls_alpha(series, 1.0);
        benchmark::DoNotOptimize(fit.alpha_hat);
    }
}
BENCHMARK(BM_ClsAlpha);

void BM_CmlJoint(benchmark::State& state) {
    RngStream rng(13, 0);
    const auto series = simulate_inarch(InarchParams{1.0, 0.5, 0}, 500, rng);
    for (auto _ : state) {
        const auto fit = cml_fit(series, CmlMode::joint);
        benchmark::DoNotOptimize(fit.alpha_hat);
    }
}
BENCHMARK(BM_CmlJoint);

void BM_LimitDraws(benchmark::State& state) {
    const std::uint32_t steps = static_cast<std::uint32_t>(state.range(0));
    CirParams params;
    params.beta = 1.0;
    params.gamma = 0.0;
    params.steps = steps;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        const auto dist =
            sample_limit(params, 100, RngStream(17, stream), 1);
        stream += 100;
        benchmark::DoNotOptimize(dist.values().data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            100 * steps);
}
BENCHMARK(BM_LimitDraws)->Arg(1000)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
