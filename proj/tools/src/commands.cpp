// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <functional>
#include <thread>

#include "rnnf/csv_io.hpp"
#include "rnnf/error.hpp"
#include "rnnf/evaluate.hpp"
#include "rnnf/explain.hpp"
#include "rnnf/forecast.hpp"
#include "rnnf/model_io.hpp"
#include "rnnf/train.hpp"

namespace rnnf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sanitize(const std::string& region) {
    std::string out = region;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return out;
}

fs::path ensure_outdir(const RunConfig& cfg) {
    const fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

Date parse_cli_date(const std::string& text, const std::string& flag) {
    try {
        return Date::parse(text);
    } catch (const ParseError& e) {
        throw ConfigError(flag + ": " + e.what());
    }
}

/// Resolves the series a command works on: either --series/--label or
/// --data plus a single --region (active cases derived from cumulatives).
TimeSeries load_target_series(const RunConfig& cfg, std::vector<fs::path>& inputs,
                              std::vector<std::string>* warnings = nullptr) {
    if (!cfg.series.empty()) {
        inputs.push_back(cfg.series);
        return load_simple_csv(cfg.series, cfg.label);
    }
    inputs.push_back(cfg.data);
    const CumulativeLoadResult loaded = load_jhu_csv(cfg.data);
    const std::string& region = cfg.regions.front();
    const auto it = loaded.regions.find(region);
    if (it == loaded.regions.end())
        throw DataError("region '" + region + "' not present in '" + cfg.data + "'");
    auto active = compute_active(it->second.confirmed, it->second.deceased, it->second.recovered);
    if (warnings) {
        warnings->insert(warnings->end(), loaded.warnings.begin(), loaded.warnings.end());
        warnings->insert(warnings->end(), active.warnings.begin(), active.warnings.end());
    }
    return std::move(active.series);
}

ScalerParams resolve_scaler(const RunConfig& cfg, const ModelBundle& bundle,
                            const TimeSeries& series, const SplitSpec* split) {
    if (cfg.scaler_policy == "model") return bundle.scaler;
    if (cfg.scaler_policy == "full-series") return fit_scaler(series);
    if (cfg.scaler_policy == "train-split") {
        if (!split) throw ConfigError("scaler policy 'train-split' needs --split");
        return fit_scaler(split_by_date(series, *split).first);
    }
    throw ConfigError("unknown scaler policy '" + cfg.scaler_policy +
                      "' (model | full-series | train-split)");
}

std::size_t resolve_test_start(const RunConfig& cfg, const TimeSeries& series) {
    if (!cfg.test_start.empty()) {
        const Date d = parse_cli_date(cfg.test_start, "--test-start");
        const auto idx = series.index_of(d);
        if (!idx)
            throw DataError("test start " + d.to_string() + " outside '" + series.region_name +
                            "' range " + series.start_date().to_string() + ".." +
                            series.end_date().to_string());
        return *idx;
    }
    const Date split = parse_cli_date(cfg.split_date, "--split");
    const auto idx = series.index_of(split);
    if (!idx || *idx + 1 >= series.size())
        throw DataError("split date " + split.to_string() + " leaves no test range in '" +
                        series.region_name + "'");
    return *idx + 1;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

void dump_json_file(const json& j, const fs::path& path) {
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << j.dump(2) << "\n";
}

} // namespace

void cmd_ingest(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    const CumulativeLoadResult loaded = load_jhu_csv(cfg.data);
    std::vector<std::string> selected;
    if (cfg.regions.empty()) {
        for (const auto& [name, unused] : loaded.regions) selected.push_back(name);
    } else {
        for (const auto& name : cfg.regions) {
            if (!loaded.regions.count(name))
                throw DataError("region '" + name + "' not present in '" + cfg.data + "'");
            selected.push_back(name);
        }
    }

    std::vector<std::string> warnings = loaded.warnings;
    ManifestInfo info{"ingest", {cfg.data}, {}, 0.0};
    for (const auto& name : selected) {
        const auto& rc = loaded.regions.at(name);
        auto active = compute_active(rc.confirmed, rc.deceased, rc.recovered);
        warnings.insert(warnings.end(), active.warnings.begin(), active.warnings.end());
        const std::string file = sanitize(name) + ".csv";
        write_dated_csv(outdir / file, "active", active.series.dates, active.series.values);
        info.outputs.push_back(file);
    }
    dump_json_file(json{{"regions", selected}, {"warnings", warnings}},
                   outdir / "ingest_report.json");
    info.outputs.push_back("ingest_report.json");
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

void cmd_train(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    ManifestInfo info{"train", {}, {}, 0.0};
    const TimeSeries series = load_target_series(cfg, info.inputs);
    const SplitSpec split{parse_cli_date(cfg.split_date, "--split"), cfg.val_fraction};

    const NativeRunResult result = run_approach2(series, cfg.to_model_config(), split);
    save_model(result.model, outdir / "model.json");
    write_train_report_json(result.train_report, outdir / "train_report.json");
    info.outputs = {"model.json", "train_report.json"};
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

void cmd_evaluate(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    ManifestInfo info{"evaluate", {cfg.model}, {}, 0.0};
    const ModelBundle bundle = load_model(cfg.model);
    const TimeSeries series = load_target_series(cfg, info.inputs);

    SplitSpec split;
    const SplitSpec* split_ptr = nullptr;
    if (!cfg.split_date.empty()) {
        split = SplitSpec{parse_cli_date(cfg.split_date, "--split"), cfg.val_fraction};
        split_ptr = &split;
    }
    const ScalerParams scaler = resolve_scaler(cfg, bundle, series, split_ptr);
    const std::size_t start = resolve_test_start(cfg, series);
    const Approach approach =
        series.region_name == bundle.source_region ? Approach::Native : Approach::Transfer;

    const EvaluationReport report =
        evaluate_one_step(model_predictor(bundle.config, bundle.params),
                          bundle.config.window_size, scaler, series, start, approach,
                          bundle.config.descriptor());
    write_evaluation_json(report, outdir / "evaluation.json");
    write_evaluation_csv(report, outdir / "evaluation.csv");
    info.outputs = {"evaluation.json", "evaluation.csv"};
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

void cmd_compare(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    ManifestInfo info{"compare", {}, {}, 0.0};
    const TimeSeries series = load_target_series(cfg, info.inputs);
    const SplitSpec split{parse_cli_date(cfg.split_date, "--split"), cfg.val_fraction};

    // architecture/window come from the preset table; training knobs and the
    // base seed come from this run's config
    std::vector<ModelConfig> presets = comparison_presets(cfg.seed);
    for (auto& preset : presets) {
        preset.epochs = cfg.epochs;
        preset.validation_fraction = cfg.val_fraction;
        preset.learning_rate = cfg.lr;
        preset.batch_size = cfg.batch;
        preset.shuffle = cfg.shuffle;
        preset.grad_clip_norm = cfg.clip;
    }
    const ComparisonTable table = compare_architectures(series, split, presets, cfg.jobs);
    write_comparison_csv(table, outdir / "comparison.csv");
    write_comparison_json(table, outdir / "comparison.json");
    info.outputs = {"comparison.csv", "comparison.json"};
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

void cmd_transfer(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    ManifestInfo info{"transfer", {cfg.model, cfg.data}, {}, 0.0};
    const ModelBundle bundle = load_model(cfg.model);
    const CumulativeLoadResult loaded = load_jhu_csv(cfg.data);

    std::vector<TimeSeries> regions;
    if (cfg.all_regions) {
        for (const auto& [name, rc] : loaded.regions)
            regions.push_back(compute_active(rc.confirmed, rc.deceased, rc.recovered).series);
    } else {
        for (const auto& name : cfg.regions) {
            const auto it = loaded.regions.find(name);
            if (it == loaded.regions.end())
                throw DataError("region '" + name + "' not present in '" + cfg.data + "'");
            regions.push_back(compute_active(it->second.confirmed, it->second.deceased,
                                             it->second.recovered)
                                  .series);
        }
    }

    const SplitSpec split{parse_cli_date(cfg.split_date, "--split"), cfg.val_fraction};
    const auto outcomes = run_approach1(bundle, regions, split, cfg.jobs);

    // optional approach-2 column: a fresh model per region, same architecture
    // and training knobs as the pretrained bundle, seeded from this run
    std::vector<TransferSummaryRow> summary(outcomes.size());
    std::vector<std::string> native_errors(outcomes.size());
    if (cfg.with_native) {
        ModelConfig native_config = bundle.config;
        native_config.seed = cfg.seed;
        parallel_for(regions.size(), cfg.jobs, [&](std::size_t i) {
            try {
                summary[i].native_mae =
                    run_approach2(regions[i], native_config, split).report.mae_value;
            } catch (const Error& e) {
                native_errors[i] = e.what();
            }
        });
    }

    json per_region = json::array();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        summary[i].region_name = o.region_name;
        json entry{{"region", o.region_name}};
        if (o.report) {
            summary[i].transfer_mae = o.report->mae_value;
            const std::string base = sanitize(o.region_name) + "_transfer";
            write_evaluation_json(*o.report, outdir / (base + ".json"));
            write_evaluation_csv(*o.report, outdir / (base + ".csv"));
            info.outputs.push_back(base + ".json");
            info.outputs.push_back(base + ".csv");
            entry["mae_transfer"] = o.report->mae_value;
        } else {
            entry["error"] = o.error;
            summary[i].error = o.error;
        }
        if (cfg.with_native) {
            if (summary[i].native_mae)
                entry["mae_native"] = *summary[i].native_mae;
            else if (!native_errors[i].empty())
                entry["native_error"] = native_errors[i];
        }
        per_region.push_back(std::move(entry));
    }

    write_transfer_summary_csv(summary, outdir / "transfer_summary.csv");
    dump_json_file(json{{"model", bundle.config.descriptor()},
                        {"source_region", bundle.source_region},
                        {"regions", std::move(per_region)}},
                   outdir / "transfer_report.json");
    info.outputs.push_back("transfer_summary.csv");
    info.outputs.push_back("transfer_report.json");
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

void cmd_explain(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    ManifestInfo info{"explain", {cfg.model}, {}, 0.0};
    const ModelBundle bundle = load_model(cfg.model);
    const TimeSeries series = load_target_series(cfg, info.inputs);

    SplitSpec split;
    const SplitSpec* split_ptr = nullptr;
    if (!cfg.split_date.empty()) {
        split = SplitSpec{parse_cli_date(cfg.split_date, "--split"), cfg.val_fraction};
        split_ptr = &split;
    }
    const ScalerParams scaler = resolve_scaler(cfg, bundle, series, split_ptr);
    const std::size_t start = resolve_test_start(cfg, series);

    const ActivationTrace trace =
        capture_trace(bundle.config, bundle.params, scaler, series, start);

    // analysis window: flags, else the per-region defaults, else everything;
    // clamped to the days the trace actually has
    long first = cfg.analysis_start;
    long last = cfg.analysis_end;
    if (first < 0 && last < 0 && !default_analysis_window(series.region_name, first, last)) {
        first = 0;
        last = static_cast<long>(trace.days()) - 1;
    }
    if (first < 0) first = 0;
    if (last < 0 || last >= static_cast<long>(trace.days()))
        last = static_cast<long>(trace.days()) - 1;
    if (first > last) first = 0; // default window larger than this trace
    const DayRange range{static_cast<std::size_t>(first), static_cast<std::size_t>(last)};

    const HeatmapFiles files = export_heatmap(trace, outdir / "activations", cfg.cell_scale);
    const Envelope env = extract_envelope(trace, range, cfg.absolute);
    write_envelope_csv(env, trace.dates, outdir / "envelope.csv");
    info.outputs = {files.csv.filename().string(), files.image.filename().string(),
                    files.sidecar.filename().string(), "envelope.csv"};

    if (!cfg.model_b.empty()) {
        info.inputs.push_back(cfg.model_b);
        const ModelBundle other = load_model(cfg.model_b);
        const ScalerParams scaler_b = resolve_scaler(cfg, other, series, split_ptr);
        const ActivationTrace trace_b =
            capture_trace(other.config, other.params, scaler_b, series, start);
        const Envelope env_b = extract_envelope(trace_b, range, cfg.absolute);
        write_envelope_csv(env_b, trace_b.dates, outdir / "envelope_b.csv");
        const TimeSeries actual = series.slice(start, series.size());
        const DriftReport drift = compare_envelopes(env, env_b, actual, scaler);
        write_drift_json(drift, outdir / "drift.json");
        info.outputs.push_back("envelope_b.csv");
        info.outputs.push_back("drift.json");
    }
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

void cmd_forecast(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    const fs::path outdir = ensure_outdir(cfg);

    ManifestInfo info{"forecast", {cfg.model}, {}, 0.0};
    const ModelBundle bundle = load_model(cfg.model);
    const TimeSeries series = load_target_series(cfg, info.inputs);
    const ScalerParams scaler = resolve_scaler(cfg, bundle, series, nullptr);

    if (!cfg.test_start.empty()) {
        const Date start = parse_cli_date(cfg.test_start, "--test-start");
        const EvalForecastResult result =
            evaluate_then_forecast(bundle, scaler, series, start, cfg.horizon);
        write_evaluation_json(result.report, outdir / "evaluation.json");
        write_evaluation_csv(result.report, outdir / "evaluation.csv");
        write_forecast_csv(result.forecast, outdir / "forecast.csv");
        write_forecast_json(result.forecast, outdir / "forecast.json");
        info.outputs = {"evaluation.json", "evaluation.csv", "forecast.csv", "forecast.json"};
    } else {
        const Forecast forecast = recursive_forecast(bundle, scaler, series, cfg.horizon);
        write_forecast_csv(forecast, outdir / "forecast.csv");
        write_forecast_json(forecast, outdir / "forecast.json");
        info.outputs = {"forecast.csv", "forecast.json"};
    }
    info.wall_seconds = seconds_since(t0);
    write_manifest(cfg, info);
}

} // namespace rnnf::cli
