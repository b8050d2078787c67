// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>

#include "tokxform/flops.hpp"
#include "tokxform/vit.hpp"

using namespace tokxform;

namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0, sd);
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = g(rng);
    return m;
}

void BM_Matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = gaussian(n, 384, 1), b = gaussian(384, 384, 2);
    for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * 384 * 384));
}
BENCHMARK(BM_Matmul)->Arg(69)->Arg(139)->Arg(197);

void BM_SoftmaxRows(benchmark::State& state) {
    const Matrix z = gaussian(197, 197, 3);
    for (auto _ : state) benchmark::DoNotOptimize(softmax_rows(z));
}
BENCHMARK(BM_SoftmaxRows);

// one reduction stage at DeiT-S width
void BM_Reduce(benchmark::State& state) {
    ReducerConfig cfg;
    cfg.mode = static_cast<ReductionMode>(state.range(0));
    const Matrix x = gaussian(197, 384, 4, 0.05);
    const Matrix attention = softmax_rows(gaussian(197, 197, 5));
    for (auto _ : state) benchmark::DoNotOptimize(reduce(x, attention, cfg, 0));
    state.SetLabel(std::string(to_string(cfg.mode)));
}
BENCHMARK(BM_Reduce)
    ->Arg(static_cast<int>(ReductionMode::prune))
    ->Arg(static_cast<int>(ReductionMode::merge))
    ->Arg(static_cast<int>(ReductionMode::transform));

void BM_ForwardTiny(benchmark::State& state) {
    ModelConfig cfg = ModelConfig::deit_tiny();
    cfg.reducer.mode = static_cast<ReductionMode>(state.range(0));
    const WeightStore w = WeightStore::synthetic(cfg, 7);
    const Matrix x = gaussian(cfg.tokens, cfg.dim, 8, 1 / std::sqrt(static_cast<double>(cfg.dim)));
    for (auto _ : state) benchmark::DoNotOptimize(forward(x, w, cfg));
    state.counters["MMAC"] = model_cost(cfg).total_macs * 1e-6;
    state.SetLabel(std::string(to_string(cfg.reducer.mode)));
}
BENCHMARK(BM_ForwardTiny)
    ->Arg(static_cast<int>(ReductionMode::none))
    ->Arg(static_cast<int>(ReductionMode::transform))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
