#include <benchmark/benchmark.h>

#include <random>

#include "prefdyn/analysis.hpp"
#include "prefdyn/core_ops.hpp"
#include "prefdyn/dpo.hpp"
#include "prefdyn/dynamics.hpp"
#include "prefdyn/ipo.hpp"

using namespace prefdyn;

namespace {

PreferenceMatrix random_matrix(int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    PreferenceMatrix P{k, std::vector<double>(static_cast<size_t>(k) * k, 0.5)};
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            double v = u(rng);
            P.at(i, j) = v;
            P.at(j, i) = 1.0 - v;
        }
    return P;
}

void bm_ipo_solve(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    PreferenceMatrix P = random_matrix(k, 1);
    SimplexVector mu = uniform_simplex(k, SimplexRole::sampling);
    SimplexVector ref = uniform_simplex(k, SimplexRole::reference);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ipo_solve(P, mu, ref, 1.0));
    }
}
BENCHMARK(bm_ipo_solve)->Arg(4)->Arg(8)->Arg(16);

void bm_dpo_solve(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    PreferenceMatrix P = random_matrix(k, 2);
    SimplexVector mu = uniform_simplex(k, SimplexRole::sampling);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dpo_solve(P, mu));
    }
}
BENCHMARK(bm_dpo_solve)->Arg(4)->Arg(8);

void bm_mrs_ipo_step(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    StepContext ctx;
    ctx.preference = random_matrix(k, 3);
    ctx.config.alpha = 0.5;
    ctx.config.beta = 2.0;
    ctx.config.lambda = 0.5;
    ctx.config.pi_ref = uniform_simplex(k, SimplexRole::reference);
    ctx.config.pi_0 = uniform_simplex(k, SimplexRole::anchor);
    SimplexVector pi = uniform_simplex(k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrs_ipo_step(pi, ctx));
    }
}
BENCHMARK(bm_mrs_ipo_step)->Arg(4)->Arg(16);

void bm_spectral_norm(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    PreferenceMatrix P = random_matrix(k, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_norm_tilde(P));
    }
}
BENCHMARK(bm_spectral_norm)->Arg(4)->Arg(16)->Arg(64);

} // namespace

BENCHMARK_MAIN();
