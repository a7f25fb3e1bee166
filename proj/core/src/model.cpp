// SPDX-License-Identifier: Apache-2.0
#include "rnnf/model.hpp"

#include <cmath>

#include "rnnf/error.hpp"
#include "rnnf/rng.hpp"

namespace rnnf {

std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::SimpleRNN: return "SimpleRNN";
        case Architecture::LSTM: return "LSTM";
        case Architecture::GRU: return "GRU";
        case Architecture::StackedRNN: return "StackedRNN";
        case Architecture::StackedLSTM: return "StackedLSTM";
        case Architecture::StackedGRU: return "StackedGRU";
    }
    throw ConfigError("unknown architecture enum value");
}

Architecture architecture_from_string(const std::string& name) {
    if (name == "SimpleRNN") return Architecture::SimpleRNN;
    if (name == "LSTM") return Architecture::LSTM;
    if (name == "GRU") return Architecture::GRU;
    if (name == "StackedRNN") return Architecture::StackedRNN;
    if (name == "StackedLSTM") return Architecture::StackedLSTM;
    if (name == "StackedGRU") return Architecture::StackedGRU;
    throw ConfigError("unknown architecture '" + name + "'");
}

CellKind cell_kind(Architecture a) {
    switch (a) {
        case Architecture::SimpleRNN:
        case Architecture::StackedRNN: return CellKind::Rnn;
        case Architecture::LSTM:
        case Architecture::StackedLSTM: return CellKind::Lstm;
        case Architecture::GRU:
        case Architecture::StackedGRU: return CellKind::Gru;
    }
    throw ConfigError("unknown architecture enum value");
}

bool is_stacked(Architecture a) {
    return a == Architecture::StackedRNN || a == Architecture::StackedLSTM ||
           a == Architecture::StackedGRU;
}

std::size_t gates_per_cell(CellKind kind) {
    switch (kind) {
        case CellKind::Rnn: return 1;
        case CellKind::Lstm: return 4;
        case CellKind::Gru: return 3;
    }
    throw ConfigError("unknown cell kind");
}

std::string ModelConfig::descriptor() const {
    std::string units;
    for (std::size_t i = 0; i < hidden_units.size(); ++i) {
        if (i) units += ',';
        units += std::to_string(hidden_units[i]);
    }
    return to_string(architecture) + "[" + units + "] w=" + std::to_string(window_size);
}

void ModelConfig::validate() const {
    const std::size_t want_layers = is_stacked(architecture) ? 2 : 1;
    if (hidden_units.size() != want_layers)
        throw ConfigError(to_string(architecture) + " needs exactly " +
                          std::to_string(want_layers) + " hidden_units entries, got " +
                          std::to_string(hidden_units.size()));
    for (std::size_t h : hidden_units)
        if (h == 0) throw ConfigError("hidden_units entries must be positive");
    if (window_size == 0) throw ConfigError("window_size must be positive");
    if (epochs == 0) throw ConfigError("epochs must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw ConfigError("validation_fraction must lie in (0,1)");
    if (grad_clip_norm < 0.0) throw ConfigError("grad_clip_norm must be >= 0");
}

std::vector<ModelConfig> comparison_presets(std::uint64_t base_seed) {
    std::vector<ModelConfig> out;
    auto add = [&](Architecture a, std::vector<std::size_t> units, std::size_t w) {
        ModelConfig c;
        c.architecture = a;
        c.hidden_units = std::move(units);
        c.window_size = w;
        c.seed = base_seed + out.size();
        out.push_back(std::move(c));
    };
    add(Architecture::SimpleRNN, {150}, 7);
    add(Architecture::LSTM, {150}, 8);
    add(Architecture::GRU, {100}, 8);
    add(Architecture::StackedRNN, {200, 50}, 5);
    add(Architecture::StackedLSTM, {150, 50}, 8);
    add(Architecture::StackedGRU, {50, 50}, 8);
    return out;
}

std::size_t ModelParameters::total_size() const {
    std::size_t n = 0;
    for (const auto& l : layers)
        n += static_cast<std::size_t>(l.input_kernel.size() + l.recurrent_kernel.size() +
                                      l.bias.size());
    return n + static_cast<std::size_t>(dense.weight.size()) + 1;
}

void ModelParameters::set_zero() {
    for (auto& l : layers) {
        l.input_kernel.setZero();
        l.recurrent_kernel.setZero();
        l.bias.setZero();
    }
    dense.weight.setZero();
    dense.bias = 0.0;
}

bool ModelParameters::all_finite() const {
    bool ok = true;
    for_each_block(*this, [&](const std::string&, std::span<const double> s) {
        for (double v : s)
            if (!std::isfinite(v)) ok = false;
    });
    return ok;
}

ModelParameters zero_parameters(const ModelConfig& config) {
    config.validate();
    const std::size_t gates = gates_per_cell(cell_kind(config.architecture));
    ModelParameters p;
    std::size_t input_dim = 1; // scalar series input at the first layer
    for (std::size_t h : config.hidden_units) {
        LayerParams lp;
        lp.input_kernel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gates * h),
                                                static_cast<Eigen::Index>(input_dim));
        lp.recurrent_kernel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gates * h),
                                                    static_cast<Eigen::Index>(h));
        lp.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(gates * h));
        p.layers.push_back(std::move(lp));
        input_dim = h;
    }
    p.dense.weight = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.hidden_units.back()));
    p.dense.bias = 0.0;
    return p;
}

namespace {

// Fills a stored (rows x cols) kernel in its serialized [cols x rows]
// row-major order, so the draw sequence matches the documented layout.
void fill_kernel(Eigen::MatrixXd& stored, SeededRng& rng) {
    const double fan_in = static_cast<double>(stored.cols());
    const double fan_out = static_cast<double>(stored.rows());
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index c = 0; c < stored.cols(); ++c)
        for (Eigen::Index r = 0; r < stored.rows(); ++r) stored(r, c) = rng.next_uniform(-s, s);
}

} // namespace

ModelParameters init_parameters(const ModelConfig& config) {
    ModelParameters p = zero_parameters(config);
    SeededRng rng(config.seed);
    const CellKind kind = cell_kind(config.architecture);
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        fill_kernel(p.layers[l].input_kernel, rng);
        fill_kernel(p.layers[l].recurrent_kernel, rng);
        if (kind == CellKind::Lstm) {
            // forget gate is block 1 of (i, f, g, o); starting it at 1 keeps
            // early cell-state gradients alive
            const Eigen::Index h = static_cast<Eigen::Index>(config.hidden_units[l]);
            p.layers[l].bias.segment(h, h).setOnes();
        }
    }
    {
        const double fan_in = static_cast<double>(p.dense.weight.size());
        const double s = std::sqrt(6.0 / (fan_in + 1.0));
        for (Eigen::Index i = 0; i < p.dense.weight.size(); ++i)
            p.dense.weight(i) = rng.next_uniform(-s, s);
    }
    return p;
}

} // namespace rnnf
