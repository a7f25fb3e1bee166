// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "rnnf/model.hpp"

namespace rnnf {

/// Recurrent state carried across time steps. `c` is used by LSTM cells only
/// and stays empty otherwise. Both start zeroed at the beginning of a window.
struct CellState {
    Eigen::VectorXd h;
    Eigen::VectorXd c;

    static CellState zero(std::size_t hidden, bool with_cell);
};

/// One LSTM step:
///   i = hsig(W_i x + U_i h + b_i), f = hsig(...), g = tanh(...), o = hsig(...)
///   c' = f (.) c + i (.) g,  h' = o (.) tanh(c')
/// Gate blocks live in the kernels in (i, f, g, o) row order.
CellState lstm_cell_step(const Eigen::VectorXd& x, const CellState& state, const LayerParams& p);

/// One GRU step:
///   z = hsig(W_z x + U_z h + b_z), r = hsig(W_r x + U_r h + b_r)
///   hc = tanh(W_h x + U_h (r (.) h) + b_h),  h' = (1 - z) (.) h + z (.) hc
/// Gate blocks in (z, r, h-candidate) row order.
Eigen::VectorXd gru_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                              const LayerParams& p);

/// One plain RNN step: h' = tanh(W x + U h + b).
Eigen::VectorXd rnn_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev,
                              const LayerParams& p);

struct ForwardResult {
    double prediction = 0.0;
    /// Final recurrent layer's hidden state at every time step, filled only
    /// when the forward pass runs with capture enabled. The last entry is the
    /// vector the dense head consumed.
    std::vector<Eigen::VectorXd> final_layer_trace;
};

/// Unrolls the window one scalar per time step through the recurrent stack
/// (a second stacked layer consumes the first layer's full output sequence),
/// then applies the linear dense head to the last layer's final hidden state.
ForwardResult forward(const ModelConfig& config, const ModelParameters& params,
                      std::span<const double> window, bool capture = false);

/// Throws ConfigError unless params shapes match the config.
void validate_shapes(const ModelConfig& config, const ModelParameters& params);

} // namespace rnnf
