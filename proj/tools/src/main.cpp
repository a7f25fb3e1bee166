// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "rnnf/date.hpp"
#include "rnnf/error.hpp"

namespace {

using rnnf::cli::RunConfig;
using nlohmann::json;

void print_error(const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

bool date_ok(const std::string& text) {
    try {
        rnnf::Date::parse(text);
        return true;
    } catch (const rnnf::Error&) {
        return false;
    }
}

// Every configuration problem is reported in one pass, before any work runs.
std::vector<std::string> validate(const std::string& cmd, const RunConfig& cfg) {
    std::vector<std::string> problems;
    const auto need_path = [&](const std::string& p, const std::string& what) {
        if (!p.empty() && !std::filesystem::exists(p))
            problems.push_back(what + " path does not exist: " + p);
    };
    need_path(cfg.data, "--data");
    need_path(cfg.series, "--series");
    need_path(cfg.model, "--model");
    need_path(cfg.model_b, "--model-b");

    const auto need_target_series = [&] {
        if (cfg.series.empty() && (cfg.data.empty() || cfg.regions.size() != 1))
            problems.push_back(cmd + " needs --series <csv>, or --data <csv> with exactly one "
                                     "--region");
    };
    const auto need_split = [&] {
        if (cfg.split_date.empty()) problems.push_back(cmd + " needs --split <YYYY-MM-DD>");
    };
    const auto need_model = [&] {
        if (cfg.model.empty()) problems.push_back(cmd + " needs --model <model.json>");
    };

    if (cmd == "ingest") {
        if (cfg.data.empty()) problems.push_back("ingest needs --data <csv>");
    } else if (cmd == "train") {
        need_target_series();
        need_split();
    } else if (cmd == "evaluate" || cmd == "explain") {
        need_model();
        need_target_series();
        if (cfg.split_date.empty() && cfg.test_start.empty())
            problems.push_back(cmd + " needs --split or --test-start");
    } else if (cmd == "compare") {
        need_target_series();
        need_split();
    } else if (cmd == "transfer") {
        need_model();
        if (cfg.data.empty()) problems.push_back("transfer needs --data <csv>");
        if (!cfg.all_regions && cfg.regions.empty())
            problems.push_back("transfer needs --all-regions or at least one --region");
        need_split();
    } else if (cmd == "forecast") {
        need_model();
        need_target_series();
        if (cfg.horizon == 0) problems.push_back("forecast needs --horizon >= 1");
    }

    for (const auto& [flag, value] :
         {std::pair<std::string, std::string>{"--split", cfg.split_date},
          {"--test-start", cfg.test_start}})
        if (!value.empty() && !date_ok(value))
            problems.push_back(flag + " is not a valid ISO date: " + value);

    if (cfg.scaler_policy != "model" && cfg.scaler_policy != "full-series" &&
        cfg.scaler_policy != "train-split")
        problems.push_back("--scaler-policy must be model, full-series or train-split");
    if (cfg.scaler_policy == "train-split" && cfg.split_date.empty())
        problems.push_back("--scaler-policy train-split needs --split");
    if (cfg.cell_scale < 1) problems.push_back("--cell-scale must be >= 1");
    if (cfg.jobs == 0) problems.push_back("--jobs must be >= 1");
    return problems;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"recurrent forecasting toolkit: train, transfer, explain and forecast "
                 "univariate daily case series"};
    app.require_subcommand(1);

    RunConfig flags; // raw flag values; merged into the effective config below
    std::string config_path;
    std::vector<std::function<void(RunConfig&)>> overrides;

    // registers an option bound to a RunConfig member and remembers how to
    // copy it into the effective config when explicitly set
    const auto opt = [&]<typename T>(CLI::App* sub, const std::string& name,
                                     T RunConfig::*member, const std::string& desc) {
        auto* o = sub->add_option(name, flags.*member, desc);
        overrides.push_back([o, member, &flags](RunConfig& cfg) {
            if (o->count() > 0) cfg.*member = flags.*member;
        });
        return o;
    };
    const auto flag = [&](CLI::App* sub, const std::string& name, bool RunConfig::*member,
                          const std::string& desc) {
        auto* o = sub->add_flag(name, flags.*member, desc);
        overrides.push_back([o, member, &flags](RunConfig& cfg) {
            if (o->count() > 0) cfg.*member = flags.*member;
        });
        return o;
    };

    std::map<std::string, std::function<void(const RunConfig&)>> dispatch;
    const auto make_sub = [&](const std::string& name, const std::string& desc,
                              const std::function<void(const RunConfig&)>& fn) {
        CLI::App* sub = app.add_subcommand(name, desc);
        dispatch[name] = fn;
        sub->add_option("--config", config_path,
                        "JSON config file or a previous run manifest to replay");
        opt(sub, "--seed", &RunConfig::seed, "seed for weight init and shuffling");
        opt(sub, "--out", &RunConfig::out, "output directory");
        opt(sub, "--jobs", &RunConfig::jobs, "parallel workers for per-region work");
        opt(sub, "--profile", &RunConfig::profile,
            "named preset: paper-maharashtra | paper-transfer | paper-india-forecast");
        return sub;
    };

    {
        CLI::App* sub = make_sub("ingest", "derive per-region active-case CSVs", rnnf::cli::cmd_ingest);
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "region filter (repeatable)");
    }
    {
        CLI::App* sub = make_sub("train", "train a model on one region's training split",
                                 rnnf::cli::cmd_train);
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "region to train on");
        opt(sub, "--series", &RunConfig::series, "two-column date,active CSV");
        opt(sub, "--label", &RunConfig::label, "region name for --series input");
        opt(sub, "--split", &RunConfig::split_date, "last training day, YYYY-MM-DD");
        opt(sub, "--arch", &RunConfig::arch,
            "SimpleRNN | LSTM | GRU | StackedRNN | StackedLSTM | StackedGRU");
        opt(sub, "--units", &RunConfig::units, "hidden units per layer (two values when stacked)");
        opt(sub, "--window", &RunConfig::window, "input window length");
        opt(sub, "--epochs", &RunConfig::epochs, "training epochs");
        opt(sub, "--batch", &RunConfig::batch, "mini-batch size");
        opt(sub, "--lr", &RunConfig::lr, "learning rate");
        opt(sub, "--val-fraction", &RunConfig::val_fraction, "chronological validation tail");
        opt(sub, "--clip", &RunConfig::clip, "max gradient norm, 0 disables");
        flag(sub, "--shuffle", &RunConfig::shuffle, "seeded shuffling of training batches");
    }
    {
        CLI::App* sub = make_sub("evaluate", "one-step-ahead evaluation of a saved model",
                                 rnnf::cli::cmd_evaluate);
        opt(sub, "--model", &RunConfig::model, "model bundle JSON");
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "region to evaluate");
        opt(sub, "--series", &RunConfig::series, "two-column date,active CSV");
        opt(sub, "--label", &RunConfig::label, "region name for --series input");
        opt(sub, "--split", &RunConfig::split_date, "train end; testing starts the day after");
        opt(sub, "--test-start", &RunConfig::test_start, "first evaluated day, YYYY-MM-DD");
        opt(sub, "--scaler-policy", &RunConfig::scaler_policy, "model | full-series | train-split");
    }
    {
        CLI::App* sub = make_sub("compare", "train and score the six architecture presets",
                                 rnnf::cli::cmd_compare);
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "region to sweep on");
        opt(sub, "--series", &RunConfig::series, "two-column date,active CSV");
        opt(sub, "--label", &RunConfig::label, "region name for --series input");
        opt(sub, "--split", &RunConfig::split_date, "last training day");
        opt(sub, "--epochs", &RunConfig::epochs, "training epochs per preset");
        opt(sub, "--batch", &RunConfig::batch, "mini-batch size");
        opt(sub, "--lr", &RunConfig::lr, "learning rate");
        opt(sub, "--val-fraction", &RunConfig::val_fraction, "validation tail");
    }
    {
        CLI::App* sub = make_sub("transfer",
                                 "evaluate a pretrained model across regions (approach "
                                 "comparison with --with-native)",
                                 rnnf::cli::cmd_transfer);
        opt(sub, "--model", &RunConfig::model, "pretrained model bundle");
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "target regions (repeatable)");
        flag(sub, "--all-regions", &RunConfig::all_regions, "evaluate every ingested region");
        flag(sub, "--with-native", &RunConfig::with_native,
             "also train per-region models for the native MAE column");
        opt(sub, "--split", &RunConfig::split_date, "train end date shared by all regions");
    }
    {
        CLI::App* sub = make_sub("explain",
                                 "capture the recurrent layer's activations, heatmap and "
                                 "min/max envelopes",
                                 rnnf::cli::cmd_explain);
        opt(sub, "--model", &RunConfig::model, "model bundle JSON");
        opt(sub, "--model-b", &RunConfig::model_b, "second model for drift comparison");
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "region to explain");
        opt(sub, "--series", &RunConfig::series, "two-column date,active CSV");
        opt(sub, "--label", &RunConfig::label, "region name for --series input");
        opt(sub, "--split", &RunConfig::split_date, "train end; capture starts the day after");
        opt(sub, "--test-start", &RunConfig::test_start, "first captured day");
        opt(sub, "--analysis-start", &RunConfig::analysis_start,
            "analysis window start, 0-based prediction day");
        opt(sub, "--analysis-end", &RunConfig::analysis_end, "analysis window end, inclusive");
        flag(sub, "--absolute", &RunConfig::absolute, "envelopes over |activation|");
        opt(sub, "--cell-scale", &RunConfig::cell_scale, "heatmap pixels per matrix cell");
        opt(sub, "--scaler-policy", &RunConfig::scaler_policy, "model | full-series | train-split");
    }
    {
        CLI::App* sub = make_sub("forecast", "recursive multi-day forecast past the series end",
                                 rnnf::cli::cmd_forecast);
        opt(sub, "--model", &RunConfig::model, "pretrained model bundle");
        opt(sub, "--data", &RunConfig::data, "multi-region cumulative CSV");
        opt(sub, "--region", &RunConfig::regions, "region to forecast");
        opt(sub, "--series", &RunConfig::series, "two-column date,active CSV");
        opt(sub, "--label", &RunConfig::label, "region name for --series input");
        opt(sub, "--test-start", &RunConfig::test_start,
            "also evaluate from this day before forecasting");
        opt(sub, "--horizon", &RunConfig::horizon, "days to forecast");
        opt(sub, "--scaler-policy", &RunConfig::scaler_policy, "model | full-series | train-split");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        json file_json = json::object();
        if (!config_path.empty()) file_json = rnnf::cli::load_config_file(config_path);

        // precedence: defaults < profile < config file < explicit flags
        std::string profile = flags.profile;
        if (profile.empty() && file_json.contains("profile"))
            profile = file_json["profile"].get<std::string>();

        RunConfig cfg;
        if (!profile.empty()) rnnf::cli::apply_profile(cfg, profile);
        std::vector<std::string> problems;
        rnnf::cli::apply_json(cfg, file_json, problems);
        for (const auto& apply : overrides) apply(cfg);
        cfg.profile = profile;

        const auto more = validate(cmd, cfg);
        problems.insert(problems.end(), more.begin(), more.end());
        if (!problems.empty()) {
            std::string joined;
            for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
            throw rnnf::ConfigError(joined);
        }

        dispatch.at(cmd)(cfg);
        return 0;
    } catch (const rnnf::ConfigError& e) {
        print_error("config", e.what());
        return 1;
    } catch (const rnnf::NumericError& e) {
        print_error("numeric", e.what());
        return 3;
    } catch (const rnnf::Error& e) { // ParseError, DataError and other data problems
        print_error("data", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
