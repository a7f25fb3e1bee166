// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "rnnf/bptt.hpp"
#include "rnnf/network.hpp"
#include "rnnf/rng.hpp"
#include "rnnf/scaler.hpp"
#include "rnnf/train.hpp"
#include "rnnf/windows.hpp"

namespace {

using namespace rnnf;

ModelConfig make_config(Architecture arch, std::size_t hidden, std::size_t w) {
    ModelConfig c;
    c.architecture = arch;
    c.hidden_units = {hidden};
    c.window_size = w;
    c.seed = 99;
    return c;
}

std::vector<double> window_of(std::size_t w) {
    SeededRng rng(3);
    std::vector<double> out(w);
    for (double& v : out) v = rng.next_unit();
    return out;
}

void BM_forward(benchmark::State& state, Architecture arch) {
    const auto config = make_config(arch, static_cast<std::size_t>(state.range(0)), 8);
    const ModelParameters params = init_parameters(config);
    const auto win = window_of(8);
    for (auto _ : state)
        benchmark::DoNotOptimize(forward(config, params, win).prediction);
}

void BM_bptt_batch32(benchmark::State& state, Architecture arch) {
    const auto config = make_config(arch, static_cast<std::size_t>(state.range(0)), 8);
    const ModelParameters params = init_parameters(config);
    SeededRng rng(4);
    std::vector<std::vector<double>> windows(32, std::vector<double>(8));
    std::vector<double> targets(32);
    for (auto& w : windows)
        for (double& v : w) v = rng.next_unit();
    for (double& t : targets) t = rng.next_unit();
    for (auto _ : state)
        benchmark::DoNotOptimize(bptt_gradients(config, params, windows, targets).batch_mse);
}

void BM_train_epoch_lstm(benchmark::State& state) {
    std::vector<double> sine(300);
    for (int t = 0; t < 300; ++t)
        sine[t] = 2.0 + std::sin(2.0 * M_PI * static_cast<double>(t) / 40.0);
    const ScalerParams scaler = fit_scaler(sine);
    const WindowedDataset ds = make_windows(transform(sine, scaler), 8);
    auto config = make_config(Architecture::LSTM, static_cast<std::size_t>(state.range(0)), 8);
    config.epochs = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(train(config, ds).report.train_losses.back());
}

} // namespace

BENCHMARK_CAPTURE(BM_forward, lstm, Architecture::LSTM)->Arg(16)->Arg(150);
BENCHMARK_CAPTURE(BM_forward, gru, Architecture::GRU)->Arg(16)->Arg(100);
BENCHMARK_CAPTURE(BM_forward, rnn, Architecture::SimpleRNN)->Arg(16)->Arg(150);
BENCHMARK_CAPTURE(BM_bptt_batch32, lstm, Architecture::LSTM)->Arg(16)->Arg(150);
BENCHMARK_CAPTURE(BM_bptt_batch32, gru, Architecture::GRU)->Arg(16)->Arg(100);
BENCHMARK(BM_train_epoch_lstm)->Arg(16)->Arg(150)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
