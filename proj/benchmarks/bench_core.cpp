#include <benchmark/benchmark.h>

#include "fcast/core/random_walk.hpp"
#include "fcast/eval/metrics.hpp"
#include "fcast/models/glm.hpp"
#include "fcast/models/lagged_linear.hpp"
#include "fcast/models/lstm.hpp"
#include "fcast/online/discrepancy.hpp"
#include "fcast/online/ensemble.hpp"

#include <random>

using namespace fcast;

namespace {

ValueSeries walk(std::size_t length, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.kind = WalkKind::Geometric;
    spec.volatility = 0.01;
    spec.drift = martingale_drift(spec.volatility);
    spec.initial = 100.0;
    spec.length = length;
    spec.seed = seed;
    return generate(spec);
}

void BM_GenerateGeometric(benchmark::State& state) {
    GeneratorSpec spec;
    spec.volatility = 0.01;
    spec.length = static_cast<std::size_t>(state.range(0));
    spec.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(spec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateGeometric)->Arg(1000)->Arg(10000);

void BM_FitLinear(benchmark::State& state) {
    const auto series = walk(static_cast<std::size_t>(state.range(0)), 3);
    const models::LagSpec lags = models::LagSpec::periodic_mix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(models::fit_linear(series, lags));
    }
}
BENCHMARK(BM_FitLinear)->Arg(1000)->Arg(4000);

void BM_FitGlm(benchmark::State& state) {
    const auto series = walk(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(models::fit_glm(series));
    }
}
BENCHMARK(BM_FitGlm)->Arg(1000)->Arg(4000);

void BM_LstmForwardBackward(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    const auto params = models::LstmParams::random_init(hidden, 1, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> inputs;
    for (int t = 0; t < 30; ++t) {
        inputs.push_back(Eigen::VectorXd::Constant(1, gauss(rng)));
    }
    for (auto _ : state) {
        const auto traj = models::lstm_forward(params, inputs);
        benchmark::DoNotOptimize(
            models::lstm_backward(params, traj, 0.5, models::LossKind::SquaredError));
    }
}
BENCHMARK(BM_LstmForwardBackward)->Arg(10)->Arg(50)->Arg(200);

void BM_EnsembleStep(benchmark::State& state) {
    const std::size_t experts = static_cast<std::size_t>(state.range(0));
    online::EnsembleConfig config;
    config.eta = 0.5;
    config.loss_cap = 1.0;
    online::EnsembleState ensemble(experts, config);
    std::vector<double> predictions(experts, 100.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            online::ensemble_step(ensemble, predictions, 100.5));
    }
}
BENCHMARK(BM_EnsembleStep)->Arg(4)->Arg(32);

void BM_EstimateDiscrepancy(benchmark::State& state) {
    const std::size_t rounds = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> losses(rounds, std::vector<double>(4));
    for (auto& row : losses) {
        for (double& l : row) {
            l = u(rng);
        }
    }
    const auto weights =
        online::DiscrepancyWeights::suffix_uniform(rounds, rounds, rounds / 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(online::estimate_discrepancy(losses, weights));
    }
}
BENCHMARK(BM_EstimateDiscrepancy)->Arg(512)->Arg(4096);

void BM_Rmse(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = gauss(rng);
        b[i] = gauss(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval::rmse(a, b));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Rmse)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
