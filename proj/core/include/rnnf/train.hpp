// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <vector>

#include "rnnf/model.hpp"
#include "rnnf/windows.hpp"

namespace rnnf {

struct TrainReport {
    std::vector<double> train_losses; // per-epoch mean MSE over training samples, scaled units
    std::vector<double> val_losses;   // per-epoch MSE on the held-out tail, frozen weights
    double wall_seconds = 0.0;
    ModelConfig config; // echo of what was trained
};

struct TrainResult {
    ModelParameters params; // final-epoch weights
    TrainReport report;
};

/// RMSProp on batch-mean MSE for config.epochs epochs, no early stopping.
/// The validation split is the chronological tail of the windows (never
/// shuffled into training, which would leak future values), batches run in
/// chronological order unless config.shuffle asks for a seeded permutation,
/// and validation loss is computed with frozen weights at each epoch end.
/// Fixed seed => bit-identical loss curves and weights across runs.
TrainResult train(const ModelConfig& config, const WindowedDataset& dataset);

/// JSON artifact with the config echo and both loss curves. Wall-clock time
/// deliberately stays out of this file (it lives in the run manifest), so a
/// replayed run reproduces the artifact byte for byte.
void write_train_report_json(const TrainReport& report, const std::filesystem::path& path);

} // namespace rnnf
