// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rnnf/model.hpp"

namespace rnnf {

/// RMSProp accumulator state, one entry per parameter.
struct OptimizerState {
    ModelParameters v; // squared-gradient moving average, shapes match params
    double rho = 0.9;
    double epsilon = 1e-7;
    double learning_rate = 0.001;
};

/// Fresh zeroed state for the given config.
OptimizerState make_rmsprop_state(const ModelConfig& config, double learning_rate);

/// In-place update, elementwise over every block:
///   v <- rho * v + (1 - rho) * g^2
///   p <- p - lr * g / sqrt(v + eps)
/// Throws ConfigError on shape mismatch between params, grads and state.
void rmsprop_step(ModelParameters& params, const ModelParameters& grads, OptimizerState& state);

} // namespace rnnf
