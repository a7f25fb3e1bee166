// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rnnf {

enum class Architecture { SimpleRNN, LSTM, GRU, StackedRNN, StackedLSTM, StackedGRU };

enum class CellKind { Rnn, Lstm, Gru };

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string& name);

CellKind cell_kind(Architecture a);
bool is_stacked(Architecture a);

/// Gate blocks stacked inside one cell's kernels: 1 for the plain RNN,
/// 4 for LSTM (order i, f, g, o), 3 for GRU (order z, r, h-candidate).
std::size_t gates_per_cell(CellKind kind);

/// Architecture description plus every knob the training loop reads.
struct ModelConfig {
    Architecture architecture = Architecture::LSTM;
    std::vector<std::size_t> hidden_units{150}; // one entry, or two when stacked
    std::size_t window_size = 8;
    std::uint64_t seed = 42;
    std::size_t epochs = 100;
    double validation_fraction = 0.10;
    double learning_rate = 0.001;
    std::size_t batch_size = 32;
    bool shuffle = false;        // seeded permutation of training batches
    double grad_clip_norm = 0.0; // max gradient norm per block; 0 disables

    std::size_t num_layers() const { return hidden_units.size(); }
    std::string descriptor() const; // e.g. "LSTM[150] w=8"

    /// Throws ConfigError when fields are inconsistent (layer count vs
    /// architecture, non-positive sizes, fraction out of range).
    void validate() const;
};

/// The six architecture-sweep presets, in their canonical order. Each preset
/// gets seed = base_seed + its index so the sweep is reproducible.
std::vector<ModelConfig> comparison_presets(std::uint64_t base_seed);

/// Weights of one recurrent layer. Gate blocks are stacked along the rows:
/// gate k occupies rows [k*H, (k+1)*H). The serialized layout transposes
/// kernels to [input_dim x gates*H] / [H x gates*H]; see the model file docs.
struct LayerParams {
    Eigen::MatrixXd input_kernel;     // (gates*H) x input_dim
    Eigen::MatrixXd recurrent_kernel; // (gates*H) x H
    Eigen::VectorXd bias;             // gates*H
};

struct DenseParams {
    Eigen::VectorXd weight; // H_last
    double bias = 0.0;
};

/// All trainable weights. The same struct doubles as gradient storage.
struct ModelParameters {
    std::vector<LayerParams> layers;
    DenseParams dense;

    std::size_t total_size() const;
    void set_zero();

    /// True when every entry is finite.
    bool all_finite() const;
};

/// Zero-valued parameters with shapes matching the config.
ModelParameters zero_parameters(const ModelConfig& config);

/// Seeded initialization: kernels uniform(-s, s) with s = sqrt(6/(fan_in +
/// fan_out)) on the serialized [fan_in x fan_out] layout, biases zero except
/// the LSTM forget-gate bias which starts at 1. Identical seeds reproduce
/// identical weights on every platform (see SeededRng).
ModelParameters init_parameters(const ModelConfig& config);

/// Calls fn(name, flat_span) for every parameter block in a fixed documented
/// order: per layer input_kernel, recurrent_kernel, bias; then dense weight
/// and dense bias.
template <typename Fn>
void for_each_block(ModelParameters& p, Fn&& fn) {
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l) + "/";
        auto& lp = p.layers[l];
        fn(prefix + "input_kernel",
           std::span<double>(lp.input_kernel.data(), static_cast<std::size_t>(lp.input_kernel.size())));
        fn(prefix + "recurrent_kernel",
           std::span<double>(lp.recurrent_kernel.data(), static_cast<std::size_t>(lp.recurrent_kernel.size())));
        fn(prefix + "bias", std::span<double>(lp.bias.data(), static_cast<std::size_t>(lp.bias.size())));
    }
    fn("dense/weight",
       std::span<double>(p.dense.weight.data(), static_cast<std::size_t>(p.dense.weight.size())));
    fn("dense/bias", std::span<double>(&p.dense.bias, 1));
}

template <typename Fn>
void for_each_block(const ModelParameters& p, Fn&& fn) {
    for_each_block(const_cast<ModelParameters&>(p), [&](const std::string& name, std::span<double> s) {
        fn(name, std::span<const double>(s.data(), s.size()));
    });
}

/// Zips two parameter sets of identical shape, block by block.
template <typename Fn>
void for_each_block_pair(ModelParameters& a, const ModelParameters& b, Fn&& fn) {
    std::vector<std::pair<std::string, std::span<const double>>> bs;
    for_each_block(b, [&](const std::string& name, std::span<const double> s) {
        bs.emplace_back(name, s);
    });
    std::size_t i = 0;
    for_each_block(a, [&](const std::string& name, std::span<double> s) {
        fn(name, s, bs[i++].second);
    });
}

} // namespace rnnf
