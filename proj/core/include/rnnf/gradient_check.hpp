// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "rnnf/model.hpp"

namespace rnnf {

struct BlockCheck {
    std::string name;
    double max_rel_error = 0.0;
    bool ok = true;
};

struct GradientCheckReport {
    std::vector<BlockCheck> blocks;
    double fd_step = 1e-5;
    double tolerance = 1e-4;

    bool passed() const {
        for (const auto& b : blocks)
            if (!b.ok) return false;
        return true;
    }
};

/// Central-difference check of BPTT gradients on the batch-mean MSE. The
/// finite-difference side evaluates the loss through the public forward()
/// path, so it also guards against the training pass drifting away from the
/// inference pass. Guarded to models with at most 10,000 parameters.
GradientCheckReport check_gradients(const ModelConfig& config, const ModelParameters& params,
                                    std::span<const std::vector<double>> windows,
                                    std::span<const double> targets, double fd_step = 1e-5,
                                    double tolerance = 1e-4);

/// Same comparison against caller-supplied analytic gradients.
GradientCheckReport check_gradients_against(const ModelConfig& config,
                                            const ModelParameters& params,
                                            std::span<const std::vector<double>> windows,
                                            std::span<const double> targets,
                                            const ModelParameters& analytic, double fd_step = 1e-5,
                                            double tolerance = 1e-4);

} // namespace rnnf
