// SPDX-License-Identifier: Apache-2.0
#include "rnnf/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <thread>

#include "rnnf/csv_io.hpp"
#include "rnnf/error.hpp"
#include "rnnf/metrics.hpp"
#include "rnnf/network.hpp"

namespace rnnf {

using nlohmann::json;

std::string to_string(Approach a) {
    return a == Approach::Transfer ? "transfer" : "native";
}

Predictor model_predictor(const ModelConfig& config, const ModelParameters& params) {
    validate_shapes(config, params);
    return [config, params](std::span<const double> window) {
        return forward(config, params, window).prediction;
    };
}

EvaluationReport evaluate_one_step(const Predictor& predict, std::size_t window_size,
                                   const ScalerParams& scaler, const TimeSeries& series,
                                   std::size_t test_start, Approach approach,
                                   const std::string& model_descriptor) {
    series.validate();
    if (test_start < window_size)
        throw DataError("evaluate_one_step: test start " + std::to_string(test_start) +
                        " leaves fewer than " + std::to_string(window_size) +
                        " actual values to seed the first window");
    if (test_start >= series.size())
        throw DataError("evaluate_one_step: test start beyond series end");

    const std::vector<double> scaled = transform(series.values, scaler);

    EvaluationReport report;
    report.region_name = series.region_name;
    report.approach = approach;
    report.model_descriptor = model_descriptor;
    report.scaler_used = scaler;
    const std::size_t n = series.size() - test_start;
    report.dates.reserve(n);
    report.predictions.reserve(n);
    report.actuals.reserve(n);

    for (std::size_t t = test_start; t < series.size(); ++t) {
        const std::span<const double> window(scaled.data() + (t - window_size), window_size);
        const double pred_scaled = predict(window);
        const double denormalized = inverse_transform(pred_scaled, scaler);
        if (!std::isfinite(pred_scaled) || !std::isfinite(denormalized))
            throw NumericError("evaluate_one_step: non-finite prediction for '" +
                               series.region_name + "' on " + series.dates[t].to_string());
        report.dates.push_back(series.dates[t]);
        report.predictions.push_back(denormalized);
        report.actuals.push_back(series.values[t]);
    }
    report.mae_value = mae(report.predictions, report.actuals);
    return report;
}

namespace {

// Index of the first evaluated day under a date split, validating that both
// sides are non-empty.
std::size_t test_start_index(const TimeSeries& series, const SplitSpec& split) {
    const auto idx = series.index_of(split.train_end_date);
    if (!idx)
        throw DataError("region '" + series.region_name + "': split date " +
                        split.train_end_date.to_string() + " outside series range");
    if (*idx + 1 >= series.size())
        throw DataError("region '" + series.region_name + "': no test data after " +
                        split.train_end_date.to_string());
    return *idx + 1;
}

// Runs fn(i) for i in [0, n), possibly on `jobs` threads. Each index writes
// only its own slot, so results are position-stable regardless of scheduling.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<RegionOutcome> run_approach1(const ModelBundle& model,
                                         std::span<const TimeSeries> regions,
                                         const SplitSpec& split, std::size_t jobs) {
    validate_shapes(model.config, model.params);
    const Predictor predict = model_predictor(model.config, model.params);

    std::vector<RegionOutcome> out(regions.size());
    parallel_for(regions.size(), jobs, [&](std::size_t i) {
        const TimeSeries& region = regions[i];
        out[i].region_name = region.region_name;
        try {
            // the pretrained weights stay frozen; only the scaler is refit,
            // on the target region's full available series
            const ScalerParams scaler = fit_scaler(region);
            const std::size_t start = test_start_index(region, split);
            out[i].report = evaluate_one_step(predict, model.config.window_size, scaler, region,
                                              start, Approach::Transfer,
                                              model.config.descriptor());
        } catch (const Error& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

NativeRunResult run_approach2(const TimeSeries& region, const ModelConfig& config,
                              const SplitSpec& split, std::size_t late_outbreak_train_days) {
    region.validate();
    config.validate();

    // Outbreaks that begin after the split date get a fixed-length training
    // window from their first report; everything else splits by date.
    std::size_t train_len = 0;
    std::size_t first_case = region.size();
    for (std::size_t i = 0; i < region.size(); ++i) {
        if (region.values[i] != 0.0) {
            first_case = i;
            break;
        }
    }
    if (first_case < region.size() && region.dates[first_case] > split.train_end_date) {
        train_len = first_case + late_outbreak_train_days;
        if (train_len + 1 >= region.size())
            throw DataError("region '" + region.region_name + "': outbreak starts " +
                            region.dates[first_case].to_string() + ", too little data for a " +
                            std::to_string(late_outbreak_train_days) + "-day training window");
    } else {
        train_len = test_start_index(region, split);
    }

    const TimeSeries train_part = region.slice(0, train_len);
    const ScalerParams scaler = fit_scaler(train_part);
    const WindowedDataset dataset =
        make_windows(transform(train_part.values, scaler), config.window_size);

    TrainResult trained = train(config, dataset);

    NativeRunResult out;
    out.model.config = config;
    out.model.params = std::move(trained.params);
    out.model.scaler = scaler;
    out.model.source_region = region.region_name;
    out.train_report = std::move(trained.report);
    out.report = evaluate_one_step(model_predictor(config, out.model.params), config.window_size,
                                   scaler, region, train_len, Approach::Native,
                                   config.descriptor());
    return out;
}

ComparisonTable compare_architectures(const TimeSeries& region, const SplitSpec& split,
                                      std::span<const ModelConfig> presets, std::size_t jobs) {
    ComparisonTable table;
    table.rows.resize(presets.size());
    parallel_for(presets.size(), jobs, [&](std::size_t i) {
        ComparisonRow& row = table.rows[i];
        row.config = presets[i];
        row.mae_value = std::numeric_limits<double>::quiet_NaN();
        try {
            row.mae_value = run_approach2(region, presets[i], split).report.mae_value;
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) {
                         if (a.error.empty() != b.error.empty()) return a.error.empty();
                         if (a.error.empty() && b.error.empty()) return a.mae_value < b.mae_value;
                         return false;
                     });
    return table;
}

void write_evaluation_csv(const EvaluationReport& report, const std::filesystem::path& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << "date,actual,predicted\n";
    for (std::size_t i = 0; i < report.dates.size(); ++i)
        outf << report.dates[i].to_string() << ',' << format_double(report.actuals[i]) << ','
             << format_double(report.predictions[i]) << "\n";
}

namespace {

json report_to_json(const EvaluationReport& r) {
    std::vector<std::string> dates;
    dates.reserve(r.dates.size());
    for (const auto& d : r.dates) dates.push_back(d.to_string());
    return json{{"region", r.region_name},
                {"approach", to_string(r.approach)},
                {"mae", r.mae_value},
                {"model", r.model_descriptor},
                {"scaler", {{"x_min", r.scaler_used.x_min}, {"x_max", r.scaler_used.x_max}}},
                {"dates", std::move(dates)},
                {"predictions", r.predictions},
                {"actuals", r.actuals}};
}

void dump_json(const json& j, const std::filesystem::path& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << j.dump(2) << "\n";
}

std::string units_label(const std::vector<std::size_t>& units) {
    std::string out;
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (i) out += '+';
        out += std::to_string(units[i]);
    }
    return out;
}

} // namespace

void write_evaluation_json(const EvaluationReport& report, const std::filesystem::path& path) {
    dump_json(report_to_json(report), path);
}

void write_comparison_csv(const ComparisonTable& table, const std::filesystem::path& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << "rank,architecture,hidden_units,layers,input_window,output_window,mae\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const ComparisonRow& row = table.rows[i];
        outf << (i + 1) << ',' << to_string(row.config.architecture) << ','
             << units_label(row.config.hidden_units) << ',' << row.config.num_layers() << ','
             << "1x" << row.config.window_size << ",1,"
             << (row.error.empty() ? format_double(row.mae_value) : "nan") << "\n";
    }
}

void write_comparison_json(const ComparisonTable& table, const std::filesystem::path& path) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r{{"architecture", to_string(row.config.architecture)},
               {"hidden_units", row.config.hidden_units},
               {"window_size", row.config.window_size},
               {"seed", row.config.seed}};
        if (row.error.empty())
            r["mae"] = row.mae_value;
        else
            r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    dump_json(json{{"rows", std::move(rows)}}, path);
}

void write_transfer_summary_csv(std::span<const TransferSummaryRow> rows,
                                const std::filesystem::path& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << "region,mae_transfer,mae_native\n";
    for (const auto& row : rows) {
        outf << row.region_name << ','
             << (row.transfer_mae ? format_double(*row.transfer_mae) : "") << ','
             << (row.native_mae ? format_double(*row.native_mae) : "") << "\n";
    }
}

} // namespace rnnf
