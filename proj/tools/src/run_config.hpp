// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "rnnf/model.hpp"

namespace rnnf::cli {

/// Everything a subcommand reads, resolved from (in increasing precedence)
/// built-in defaults, --profile, --config file, explicit flags.
struct RunConfig {
    // inputs
    std::string data;    // multi-region cumulative CSV
    std::string series;  // two-column date,active CSV
    std::string model;   // model bundle JSON
    std::string model_b; // second bundle for envelope comparison
    std::vector<std::string> regions;
    std::string label = "region"; // region name for --series inputs
    bool all_regions = false;
    bool with_native = false;

    // split / evaluation range
    std::string split_date; // train end, inclusive
    std::string test_start; // first evaluated day (overrides split for eval)

    // model / training
    std::string arch = "LSTM";
    std::vector<std::size_t> units{150};
    std::size_t window = 8;
    std::size_t epochs = 100;
    std::size_t batch = 32;
    double lr = 0.001;
    double val_fraction = 0.10;
    double clip = 0.0;
    bool shuffle = false;
    std::uint64_t seed = 42;

    // explainability
    long analysis_start = -1; // -1: per-region default or full range
    long analysis_end = -1;
    bool absolute = false;
    int cell_scale = 2;
    std::string scaler_policy = "model"; // model | full-series | train-split

    // forecasting
    std::size_t horizon = 80;

    // run control
    std::string out = "out";
    std::size_t jobs = 1;
    std::string profile;

    ModelConfig to_model_config() const;
    nlohmann::json to_json() const;
};

/// Applies a named preset. Throws ConfigError for unknown names.
void apply_profile(RunConfig& cfg, const std::string& name);
std::vector<std::string> known_profiles();

/// Applies every recognized key present in j; unknown keys are collected into
/// `problems` so a config typo fails loudly before any work starts.
void apply_json(RunConfig& cfg, const nlohmann::json& j, std::vector<std::string>& problems);

/// Reads --config input: either a plain config object or a run manifest
/// (object with "command" and a nested "config").
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Per-region default analysis windows (0-based day indices into the
/// prediction range) used by the explain command when none are given.
bool default_analysis_window(const std::string& region, long& first, long& last);

/// FNV-1a 64 content digest, "fnv1a64:<hex>".
std::string file_digest(const std::filesystem::path& path);

struct ManifestInfo {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
};

/// Writes <out>/manifest.json: tool version, command, resolved config, input
/// digests, produced artifacts and timing. Re-running the same command with
/// --config pointing at this manifest replays the run.
void write_manifest(const RunConfig& cfg, const ManifestInfo& info);

} // namespace rnnf::cli
