// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "rnnf/model.hpp"
#include "rnnf/scaler.hpp"

namespace rnnf {

/// A trained model as it travels between commands: architecture, weights and
/// the scaler fitted on the training region (transfer runs need it to read
/// the model's input range).
struct ModelBundle {
    ModelConfig config;
    ModelParameters params;
    ScalerParams scaler;
    std::string source_region;
};

/// Single JSON document: config, gate-stacked weight arrays flattened
/// row-major over their serialized [fan_in x fan_out] shapes, scaler, format
/// version. Doubles are written in shortest round-trip form, so
/// serialize/parse is bit-exact.
std::string serialize_model(const ModelBundle& bundle);
ModelBundle parse_model(const std::string& json_text);

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

} // namespace rnnf
