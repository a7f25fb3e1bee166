// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rnnf/model_io.hpp"
#include "rnnf/scaler.hpp"
#include "rnnf/timeseries.hpp"
#include "rnnf/train.hpp"

namespace rnnf {

/// Transfer = pretrained weights applied to a foreign region (approach-1);
/// Native = trained and tested on the same region (approach-2).
enum class Approach { Transfer, Native };
std::string to_string(Approach a);

/// Scaled window in, scaled one-step prediction out. Tests substitute stubs;
/// production code wraps a trained network via model_predictor.
using Predictor = std::function<double(std::span<const double>)>;

Predictor model_predictor(const ModelConfig& config, const ModelParameters& params);

struct EvaluationReport {
    std::string region_name;
    Approach approach = Approach::Native;
    double mae_value = 0.0; // case-count units
    std::vector<Date> dates;
    std::vector<double> predictions; // denormalized
    std::vector<double> actuals;
    std::string model_descriptor;
    ScalerParams scaler_used;
};

/// One-step-ahead evaluation with teacher forcing: the window for each test
/// day holds the previous w *actual* values (spanning the train/test boundary
/// where needed), scaled with the given scaler; predictions are denormalized
/// before the MAE. test_start is the index of the first evaluated day and
/// must be >= window_size.
EvaluationReport evaluate_one_step(const Predictor& predict, std::size_t window_size,
                                   const ScalerParams& scaler, const TimeSeries& series,
                                   std::size_t test_start, Approach approach,
                                   const std::string& model_descriptor);

struct RegionOutcome {
    std::string region_name;
    std::optional<EvaluationReport> report;
    std::string error; // empty on success; failures never abort the batch
};

/// Approach-1: evaluates the frozen pretrained model on each region's test
/// split. The scaler is refit on the target region's full series; the model
/// weights are never touched. `jobs` > 1 evaluates regions in parallel,
/// results stay in input order.
std::vector<RegionOutcome> run_approach1(const ModelBundle& model,
                                         std::span<const TimeSeries> regions,
                                         const SplitSpec& split, std::size_t jobs = 1);

struct NativeRunResult {
    EvaluationReport report;
    ModelBundle model; // freshly trained on the region's own training split
    TrainReport train_report;
};

/// Approach-2: trains on the region's own training split (scaler fitted on
/// that split only) and evaluates on the remainder. Regions whose outbreak
/// starts after the split date get a training window of
/// `late_outbreak_train_days` days from their first nonzero report instead.
NativeRunResult run_approach2(const TimeSeries& region, const ModelConfig& config,
                              const SplitSpec& split,
                              std::size_t late_outbreak_train_days = 300);

struct ComparisonRow {
    ModelConfig config;
    double mae_value = 0.0;
    std::string error; // empty on success
};

/// Rows sorted ascending by MAE, failed presets at the end.
struct ComparisonTable {
    std::vector<ComparisonRow> rows;
};

/// Trains every preset on the region's training split and scores one-step
/// MAE on its test split. Preset failures become error rows, not aborts.
ComparisonTable compare_architectures(const TimeSeries& region, const SplitSpec& split,
                                      std::span<const ModelConfig> presets, std::size_t jobs = 1);

/// Flat per-day artifact: `date,actual,predicted`.
void write_evaluation_csv(const EvaluationReport& report, const std::filesystem::path& path);
void write_evaluation_json(const EvaluationReport& report, const std::filesystem::path& path);

/// `rank,architecture,hidden_units,layers,input_window,output_window,mae`,
/// hidden unit counts joined with '+'. Error rows carry mae "nan".
void write_comparison_csv(const ComparisonTable& table, const std::filesystem::path& path);
void write_comparison_json(const ComparisonTable& table, const std::filesystem::path& path);

struct TransferSummaryRow {
    std::string region_name;
    std::optional<double> transfer_mae;
    std::optional<double> native_mae;
    std::string error;
};

/// Per-region two-approach summary: `region,mae_transfer,mae_native`.
void write_transfer_summary_csv(std::span<const TransferSummaryRow> rows,
                                const std::filesystem::path& path);

} // namespace rnnf
