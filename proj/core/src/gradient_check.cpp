// SPDX-License-Identifier: Apache-2.0
#include "rnnf/gradient_check.hpp"

#include <cmath>

#include "rnnf/bptt.hpp"
#include "rnnf/error.hpp"
#include "rnnf/metrics.hpp"
#include "rnnf/network.hpp"

namespace rnnf {

namespace {

constexpr std::size_t kMaxCheckedParams = 10'000;

double batch_loss(const ModelConfig& config, const ModelParameters& params,
                  std::span<const std::vector<double>> windows, std::span<const double> targets) {
    std::vector<double> preds;
    preds.reserve(windows.size());
    for (const auto& w : windows) preds.push_back(forward(config, params, w).prediction);
    return mse(preds, targets);
}

} // namespace

GradientCheckReport check_gradients_against(const ModelConfig& config,
                                            const ModelParameters& params,
                                            std::span<const std::vector<double>> windows,
                                            std::span<const double> targets,
                                            const ModelParameters& analytic, double fd_step,
                                            double tolerance) {
    if (params.total_size() > kMaxCheckedParams)
        throw ConfigError("check_gradients: model has " + std::to_string(params.total_size()) +
                          " parameters, guard is " + std::to_string(kMaxCheckedParams));

    GradientCheckReport report;
    report.fd_step = fd_step;
    report.tolerance = tolerance;

    ModelParameters probe = params; // mutated one entry at a time
    std::vector<std::pair<std::string, std::span<const double>>> analytic_blocks;
    for_each_block(analytic, [&](const std::string& name, std::span<const double> s) {
        analytic_blocks.emplace_back(name, s);
    });

    std::size_t bi = 0;
    for_each_block(probe, [&](const std::string& name, std::span<double> block) {
        const std::span<const double> grad = analytic_blocks[bi++].second;
        BlockCheck check;
        check.name = name;
        for (std::size_t i = 0; i < block.size(); ++i) {
            const double saved = block[i];
            block[i] = saved + fd_step;
            const double up = batch_loss(config, probe, windows, targets);
            block[i] = saved - fd_step;
            const double down = batch_loss(config, probe, windows, targets);
            block[i] = saved;

            const double fd = (up - down) / (2.0 * fd_step);
            const double denom = std::max(std::abs(fd), std::abs(grad[i]));
            // entries that are zero on both sides carry no signal
            const double rel = denom < 1e-8 ? 0.0 : std::abs(fd - grad[i]) / denom;
            check.max_rel_error = std::max(check.max_rel_error, rel);
        }
        check.ok = check.max_rel_error <= tolerance;
        report.blocks.push_back(std::move(check));
    });
    return report;
}

GradientCheckReport check_gradients(const ModelConfig& config, const ModelParameters& params,
                                    std::span<const std::vector<double>> windows,
                                    std::span<const double> targets, double fd_step,
                                    double tolerance) {
    const BpttResult r = bptt_gradients(config, params, windows, targets);
    return check_gradients_against(config, params, windows, targets, r.gradients, fd_step,
                                   tolerance);
}

} // namespace rnnf
