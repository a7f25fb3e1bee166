// SPDX-License-Identifier: Apache-2.0
#include "rnnf/optimizer.hpp"

#include <cmath>

#include "rnnf/error.hpp"

namespace rnnf {

OptimizerState make_rmsprop_state(const ModelConfig& config, double learning_rate) {
    OptimizerState s;
    s.v = zero_parameters(config);
    s.learning_rate = learning_rate;
    return s;
}

void rmsprop_step(ModelParameters& params, const ModelParameters& grads, OptimizerState& state) {
    if (params.total_size() != grads.total_size() || params.total_size() != state.v.total_size())
        throw ConfigError("rmsprop_step: parameter/gradient/state sizes disagree");

    std::vector<std::span<double>> v_blocks;
    for_each_block(state.v, [&](const std::string&, std::span<double> s) { v_blocks.push_back(s); });

    std::size_t bi = 0;
    for_each_block_pair(params, grads,
                        [&](const std::string& name, std::span<double> p, std::span<const double> g) {
                            std::span<double> v = v_blocks[bi++];
                            if (p.size() != g.size() || p.size() != v.size())
                                throw ConfigError("rmsprop_step: block '" + name + "' shape mismatch");
                            for (std::size_t i = 0; i < p.size(); ++i) {
                                v[i] = state.rho * v[i] + (1.0 - state.rho) * g[i] * g[i];
                                p[i] -= state.learning_rate * g[i] / std::sqrt(v[i] + state.epsilon);
                            }
                        });
}

} // namespace rnnf
