#include "sigaug/datasets.hpp"
#include "sigaug/model.hpp"
#include "sigaug/normalization.hpp"
#include "sigaug/signature.hpp"

#include <benchmark/benchmark.h>

using namespace sigaug;

namespace {

TimeSeries bench_series(int n, int d) {
    Rng rng(99);
    TimeSeries s;
    s.times = uniform_times(n);
    s.values.resize(n, d);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c)
            s.values(i, c) = (i ? s.values(i - 1, c) : 0.0) + 0.2 * rng.normal();
    return s;
}

void BM_Signature(benchmark::State& state) {
    const TimeSeries x = bench_series(static_cast<int>(state.range(0)), 2);
    const int level = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(signature(x, level));
}
BENCHMARK(BM_Signature)->Args({50, 3})->Args({100, 4})->Args({200, 4});

void BM_SignatureVjp(benchmark::State& state) {
    const TimeSeries x = bench_series(static_cast<int>(state.range(0)), 2);
    const int level = static_cast<int>(state.range(1));
    TruncTensor cot(2, level);
    for (double& v : cot.raw()) v = 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(signature_vjp(x, level, cot));
}
BENCHMARK(BM_SignatureVjp)->Args({50, 3})->Args({100, 4});

void BM_SolveLambda(benchmark::State& state) {
    const TimeSeries x = bench_series(20, 2);
    const TruncTensor sig = signature(x, static_cast<int>(state.range(0)));
    const NormConfig cfg{1.5, 1.0, 1e-12, 200};
    for (auto _ : state) benchmark::DoNotOptimize(solve_lambda(sig, cfg));
}
BENCHMARK(BM_SolveLambda)->Arg(3)->Arg(5);

void BM_ModelForward(benchmark::State& state) {
    const TimeSeries x = bench_series(50, 1);
    Hyper hyper;
    hyper.L = 3;
    hyper.K = static_cast<int>(state.range(0));
    Rng init_rng(7);
    const ModelParams p = init_model(1, x.times, 2, hyper, init_rng);
    const Rng rng(11);
    for (auto _ : state) benchmark::DoNotOptimize(forward(p, x, rng));
}
BENCHMARK(BM_ModelForward)->Arg(4)->Arg(16);

void BM_ModelLossGrad(benchmark::State& state) {
    const TimeSeries x = bench_series(50, 1);
    Hyper hyper;
    hyper.L = 3;
    hyper.K = static_cast<int>(state.range(0));
    Rng init_rng(7);
    const ModelParams p = init_model(1, x.times, 2, hyper, init_rng);
    const Rng rng(11);
    for (auto _ : state) benchmark::DoNotOptimize(loss_and_grad(p, x, 0, rng));
}
BENCHMARK(BM_ModelLossGrad)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
