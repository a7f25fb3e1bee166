// SPDX-License-Identifier: Apache-2.0
#include "rnnf/train.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "rnnf/bptt.hpp"
#include "rnnf/error.hpp"
#include "rnnf/metrics.hpp"
#include "rnnf/network.hpp"
#include "rnnf/optimizer.hpp"
#include "rnnf/rng.hpp"

namespace rnnf {

namespace {

// Distinct stream from the weight-init draws on the same seed.
constexpr std::uint64_t kShuffleStreamSalt = 0x9E3779B97F4A7C15ull;

void clip_by_global_norm(ModelParameters& grads, double max_norm) {
    double sq = 0.0;
    for_each_block(grads, [&](const std::string&, std::span<const double> s) {
        for (double v : s) sq += v * v;
    });
    const double norm = std::sqrt(sq);
    if (norm <= max_norm || norm == 0.0) return;
    const double scale = max_norm / norm;
    for_each_block(grads, [&](const std::string&, std::span<double> s) {
        for (double& v : s) v *= scale;
    });
}

} // namespace

TrainResult train(const ModelConfig& config, const WindowedDataset& dataset) {
    config.validate();
    if (dataset.window_size != config.window_size)
        throw ConfigError("train: dataset windows of size " + std::to_string(dataset.window_size) +
                          ", config expects " + std::to_string(config.window_size));

    const std::size_t n = dataset.size();
    const std::size_t n_val = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * config.validation_fraction));
    if (n_val == 0 || n_val >= n)
        throw DataError("train: dataset of " + std::to_string(n) +
                        " windows cannot hold a validation fraction of " +
                        std::to_string(config.validation_fraction));
    const std::size_t n_train = n - n_val;

    const auto started = std::chrono::steady_clock::now();

    ModelParameters params = init_parameters(config);
    OptimizerState opt = make_rmsprop_state(config, config.learning_rate);
    SeededRng shuffle_rng(config.seed + kShuffleStreamSalt);

    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), 0);

    TrainResult out;
    out.report.config = config;
    out.report.train_losses.reserve(config.epochs);
    out.report.val_losses.reserve(config.epochs);

    std::vector<std::vector<double>> batch_windows;
    std::vector<double> batch_targets;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) {
            for (std::size_t i = n_train - 1; i > 0; --i) {
                const std::size_t j = shuffle_rng.next_index(i + 1);
                std::swap(order[i], order[j]);
            }
        }

        double epoch_se = 0.0;
        for (std::size_t start = 0; start < n_train; start += config.batch_size) {
            const std::size_t stop = std::min(start + config.batch_size, n_train);
            batch_windows.clear();
            batch_targets.clear();
            for (std::size_t k = start; k < stop; ++k) {
                batch_windows.push_back(dataset.inputs[order[k]]);
                batch_targets.push_back(dataset.targets[order[k]]);
            }
            BpttResult step;
            try {
                step = bptt_gradients(config, params, batch_windows, batch_targets);
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch + 1) +
                                   ", batch starting at sample " + std::to_string(start) + ")");
            }
            if (config.grad_clip_norm > 0.0)
                clip_by_global_norm(step.gradients, config.grad_clip_norm);
            rmsprop_step(params, step.gradients, opt);
            epoch_se += step.batch_mse * static_cast<double>(stop - start);
        }
        const double train_loss = epoch_se / static_cast<double>(n_train);
        if (!std::isfinite(train_loss))
            throw NumericError("train: non-finite training loss at epoch " +
                               std::to_string(epoch + 1));
        out.report.train_losses.push_back(train_loss);

        // frozen-weight validation on the chronological tail
        std::vector<double> val_preds;
        val_preds.reserve(n_val);
        for (std::size_t k = n_train; k < n; ++k)
            val_preds.push_back(forward(config, params, dataset.inputs[k]).prediction);
        out.report.val_losses.push_back(
            mse(val_preds, std::span<const double>(dataset.targets).subspan(n_train)));
    }

    out.params = std::move(params);
    out.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

void write_train_report_json(const TrainReport& report, const std::filesystem::path& path) {
    const nlohmann::json j{
        {"config",
         {{"architecture", to_string(report.config.architecture)},
          {"hidden_units", report.config.hidden_units},
          {"window_size", report.config.window_size},
          {"seed", report.config.seed},
          {"epochs", report.config.epochs},
          {"validation_fraction", report.config.validation_fraction},
          {"learning_rate", report.config.learning_rate},
          {"batch_size", report.config.batch_size},
          {"shuffle", report.config.shuffle},
          {"grad_clip_norm", report.config.grad_clip_norm}}},
        {"train_losses", report.train_losses},
        {"val_losses", report.val_losses}};
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << j.dump(2) << "\n";
}

} // namespace rnnf
