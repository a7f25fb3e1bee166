// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "rnnf/model.hpp"

namespace rnnf {

struct BpttResult {
    ModelParameters gradients; // d(batch-mean MSE)/d(theta), shapes match params
    double batch_mse = 0.0;
    std::vector<double> predictions; // one per sample, in input order
};

/// Exact reverse-mode gradients of the batch-mean MSE through the fully
/// unrolled recurrent stack. Windows are consumed one scalar per step; for
/// stacked models the gradient of the upper layer's per-step inputs flows
/// into the lower layer's per-step hidden states.
///
/// Throws ConfigError on shape mismatch and NumericError (with the sample
/// index) when a non-finite value appears mid-pass.
BpttResult bptt_gradients(const ModelConfig& config, const ModelParameters& params,
                          std::span<const std::vector<double>> windows,
                          std::span<const double> targets);

} // namespace rnnf
