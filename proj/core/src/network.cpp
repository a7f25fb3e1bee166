// SPDX-License-Identifier: Apache-2.0
#include "rnnf/network.hpp"

#include "rnnf/activations.hpp"
#include "rnnf/error.hpp"

namespace rnnf {

namespace {

void check_layer_dims(const Eigen::VectorXd& x, const Eigen::VectorXd& h, const LayerParams& p,
                      std::size_t gates) {
    const Eigen::Index gh = p.input_kernel.rows();
    if (p.recurrent_kernel.rows() != gh || p.bias.size() != gh)
        throw ConfigError("cell step: gate-stacked dimensions disagree across W/U/b");
    if (gh % static_cast<Eigen::Index>(gates) != 0)
        throw ConfigError("cell step: kernel rows not a multiple of the gate count");
    const Eigen::Index h_dim = gh / static_cast<Eigen::Index>(gates);
    if (p.recurrent_kernel.cols() != h_dim)
        throw ConfigError("cell step: recurrent kernel must be (gates*H) x H");
    if (x.size() != p.input_kernel.cols())
        throw ConfigError("cell step: input has dim " + std::to_string(x.size()) +
                          ", kernel expects " + std::to_string(p.input_kernel.cols()));
    if (h.size() != h_dim)
        throw ConfigError("cell step: state has dim " + std::to_string(h.size()) +
                          ", kernel expects " + std::to_string(h_dim));
}

} // namespace

CellState CellState::zero(std::size_t hidden, bool with_cell) {
    CellState s;
    s.h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden));
    if (with_cell) s.c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden));
    return s;
}

CellState lstm_cell_step(const Eigen::VectorXd& x, const CellState& state, const LayerParams& p) {
    check_layer_dims(x, state.h, p, 4);
    const Eigen::Index h_dim = state.h.size();
    if (state.c.size() != h_dim) throw ConfigError("lstm_cell_step: cell state dim mismatch");

    const Eigen::VectorXd preact = p.input_kernel * x + p.recurrent_kernel * state.h + p.bias;
    CellState next;
    next.c.resize(h_dim);
    next.h.resize(h_dim);
    for (Eigen::Index j = 0; j < h_dim; ++j) {
        const double i_g = hard_sigmoid(preact(j));
        const double f_g = hard_sigmoid(preact(h_dim + j));
        const double g_g = tanh_act(preact(2 * h_dim + j));
        const double o_g = hard_sigmoid(preact(3 * h_dim + j));
        next.c(j) = f_g * state.c(j) + i_g * g_g;
        next.h(j) = o_g * tanh_act(next.c(j));
    }
    return next;
}

Eigen::VectorXd gru_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                              const LayerParams& p) {
    check_layer_dims(x, h_prev, p, 3);
    const Eigen::Index h_dim = h_prev.size();

    // z and r come from plain W x + U h; the candidate's recurrent term uses
    // the reset-gated state r (.) h.
    const Eigen::VectorXd in_part = p.input_kernel * x + p.bias;
    const Eigen::VectorXd rec_zr = p.recurrent_kernel.topRows(2 * h_dim) * h_prev;

    Eigen::VectorXd z(h_dim), r(h_dim);
    for (Eigen::Index j = 0; j < h_dim; ++j) {
        z(j) = hard_sigmoid(in_part(j) + rec_zr(j));
        r(j) = hard_sigmoid(in_part(h_dim + j) + rec_zr(h_dim + j));
    }
    const Eigen::VectorXd rh = r.cwiseProduct(h_prev);
    const Eigen::VectorXd rec_h = p.recurrent_kernel.bottomRows(h_dim) * rh;

    Eigen::VectorXd h_next(h_dim);
    for (Eigen::Index j = 0; j < h_dim; ++j) {
        const double cand = tanh_act(in_part(2 * h_dim + j) + rec_h(j));
        h_next(j) = (1.0 - z(j)) * h_prev(j) + z(j) * cand;
    }
    return h_next;
}

Eigen::VectorXd rnn_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                              const LayerParams& p) {
    check_layer_dims(x, h_prev, p, 1);
    Eigen::VectorXd preact = p.input_kernel * x + p.recurrent_kernel * h_prev + p.bias;
    for (Eigen::Index j = 0; j < preact.size(); ++j) preact(j) = tanh_act(preact(j));
    return preact;
}

void validate_shapes(const ModelConfig& config, const ModelParameters& params) {
    config.validate();
    const std::size_t gates = gates_per_cell(cell_kind(config.architecture));
    if (params.layers.size() != config.num_layers())
        throw ConfigError("parameters carry " + std::to_string(params.layers.size()) +
                          " layers, config expects " + std::to_string(config.num_layers()));
    std::size_t input_dim = 1;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& lp = params.layers[l];
        const auto gh = static_cast<Eigen::Index>(gates * config.hidden_units[l]);
        if (lp.input_kernel.rows() != gh ||
            lp.input_kernel.cols() != static_cast<Eigen::Index>(input_dim) ||
            lp.recurrent_kernel.rows() != gh ||
            lp.recurrent_kernel.cols() != static_cast<Eigen::Index>(config.hidden_units[l]) ||
            lp.bias.size() != gh)
            throw ConfigError("layer " + std::to_string(l) + " parameter shapes do not match " +
                              config.descriptor());
        input_dim = config.hidden_units[l];
    }
    if (params.dense.weight.size() != static_cast<Eigen::Index>(config.hidden_units.back()))
        throw ConfigError("dense head width does not match the last recurrent layer");
}

ForwardResult forward(const ModelConfig& config, const ModelParameters& params,
                      std::span<const double> window, bool capture) {
    validate_shapes(config, params);
    if (window.size() != config.window_size)
        throw ConfigError("forward: window length " + std::to_string(window.size()) +
                          " != configured " + std::to_string(config.window_size));

    const CellKind kind = cell_kind(config.architecture);
    const bool lstm = kind == CellKind::Lstm;
    const std::size_t n_layers = config.num_layers();

    std::vector<CellState> states;
    states.reserve(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l)
        states.push_back(CellState::zero(config.hidden_units[l], lstm));

    ForwardResult out;
    Eigen::VectorXd x(1);
    for (std::size_t t = 0; t < window.size(); ++t) {
        x.resize(1);
        x(0) = window[t];
        for (std::size_t l = 0; l < n_layers; ++l) {
            switch (kind) {
                case CellKind::Lstm:
                    states[l] = lstm_cell_step(x, states[l], params.layers[l]);
                    break;
                case CellKind::Gru:
                    states[l].h = gru_cell_step(x, states[l].h, params.layers[l]);
                    break;
                case CellKind::Rnn:
                    states[l].h = rnn_cell_step(x, states[l].h, params.layers[l]);
                    break;
            }
            x = states[l].h;
        }
        if (capture) out.final_layer_trace.push_back(states.back().h);
    }
    out.prediction = params.dense.weight.dot(states.back().h) + params.dense.bias;
    return out;
}

} // namespace rnnf
