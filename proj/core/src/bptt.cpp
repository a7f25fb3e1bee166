// SPDX-License-Identifier: Apache-2.0
#include "rnnf/bptt.hpp"

#include <cmath>

#include "rnnf/activations.hpp"
#include "rnnf/error.hpp"
#include "rnnf/network.hpp"

namespace rnnf {

namespace {

// Everything one layer step must remember for the reverse pass.
struct StepCache {
    Eigen::VectorXd x;      // input to the layer at this step
    Eigen::VectorXd h_prev; // entering hidden state
    Eigen::VectorXd c_prev; // entering cell state (LSTM)
    Eigen::VectorXd preact; // gate pre-activations, gate-stacked
    Eigen::VectorXd gates;  // activated gates, gate-stacked
    Eigen::VectorXd rh;     // GRU: r (.) h_prev
    Eigen::VectorXd c;      // cell state after the step (LSTM)
    Eigen::VectorXd h;      // hidden state after the step
};

StepCache run_step(CellKind kind, const LayerParams& p, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) {
    StepCache s;
    s.x = x;
    s.h_prev = h_prev;
    const Eigen::Index hd = h_prev.size();

    switch (kind) {
        case CellKind::Lstm: {
            s.c_prev = c_prev;
            s.preact = p.input_kernel * x + p.recurrent_kernel * h_prev + p.bias;
            s.gates.resize(4 * hd);
            s.c.resize(hd);
            s.h.resize(hd);
            for (Eigen::Index j = 0; j < hd; ++j) {
                const double ig = hard_sigmoid(s.preact(j));
                const double fg = hard_sigmoid(s.preact(hd + j));
                const double gg = tanh_act(s.preact(2 * hd + j));
                const double og = hard_sigmoid(s.preact(3 * hd + j));
                s.gates(j) = ig;
                s.gates(hd + j) = fg;
                s.gates(2 * hd + j) = gg;
                s.gates(3 * hd + j) = og;
                s.c(j) = fg * c_prev(j) + ig * gg;
                s.h(j) = og * tanh_act(s.c(j));
            }
            break;
        }
        case CellKind::Gru: {
            const Eigen::VectorXd in_part = p.input_kernel * x + p.bias;
            const Eigen::VectorXd rec_zr = p.recurrent_kernel.topRows(2 * hd) * h_prev;
            s.preact.resize(3 * hd);
            s.gates.resize(3 * hd);
            for (Eigen::Index j = 0; j < hd; ++j) {
                s.preact(j) = in_part(j) + rec_zr(j);
                s.preact(hd + j) = in_part(hd + j) + rec_zr(hd + j);
                s.gates(j) = hard_sigmoid(s.preact(j));           // z
                s.gates(hd + j) = hard_sigmoid(s.preact(hd + j)); // r
            }
            s.rh = s.gates.segment(hd, hd).cwiseProduct(h_prev);
            const Eigen::VectorXd rec_h = p.recurrent_kernel.bottomRows(hd) * s.rh;
            s.h.resize(hd);
            for (Eigen::Index j = 0; j < hd; ++j) {
                s.preact(2 * hd + j) = in_part(2 * hd + j) + rec_h(j);
                const double cand = tanh_act(s.preact(2 * hd + j));
                s.gates(2 * hd + j) = cand;
                s.h(j) = (1.0 - s.gates(j)) * h_prev(j) + s.gates(j) * cand;
            }
            break;
        }
        case CellKind::Rnn: {
            s.preact = p.input_kernel * x + p.recurrent_kernel * h_prev + p.bias;
            s.h.resize(hd);
            for (Eigen::Index j = 0; j < hd; ++j) s.h(j) = tanh_act(s.preact(j));
            s.gates = s.h;
            break;
        }
    }
    return s;
}

// Reverse of run_step. dh is the total gradient arriving at h; dc is the
// carry arriving at c (LSTM). Outputs the carries for step t-1 and the
// gradient w.r.t. this step's input.
void backward_step(CellKind kind, const LayerParams& p, const StepCache& s, Eigen::VectorXd& dh,
                   Eigen::VectorXd& dc, Eigen::VectorXd& dx, LayerParams& grad) {
    const Eigen::Index hd = s.h.size();

    switch (kind) {
        case CellKind::Lstm: {
            Eigen::VectorXd dpre(4 * hd);
            Eigen::VectorXd dc_prev(hd);
            for (Eigen::Index j = 0; j < hd; ++j) {
                const double ig = s.gates(j);
                const double fg = s.gates(hd + j);
                const double gg = s.gates(2 * hd + j);
                const double og = s.gates(3 * hd + j);
                const double tc = tanh_act(s.c(j));
                const double d_o = dh(j) * tc;
                const double d_c = dc(j) + dh(j) * og * (1.0 - tc * tc);
                dpre(j) = d_c * gg * hard_sigmoid_grad(s.preact(j));
                dpre(hd + j) = d_c * s.c_prev(j) * hard_sigmoid_grad(s.preact(hd + j));
                dpre(2 * hd + j) = d_c * ig * (1.0 - gg * gg);
                dpre(3 * hd + j) = d_o * hard_sigmoid_grad(s.preact(3 * hd + j));
                dc_prev(j) = d_c * fg;
            }
            grad.input_kernel.noalias() += dpre * s.x.transpose();
            grad.recurrent_kernel.noalias() += dpre * s.h_prev.transpose();
            grad.bias += dpre;
            dh.noalias() = p.recurrent_kernel.transpose() * dpre;
            dx.noalias() = p.input_kernel.transpose() * dpre;
            dc = std::move(dc_prev);
            break;
        }
        case CellKind::Gru: {
            Eigen::VectorXd dpre(3 * hd);
            Eigen::VectorXd dh_prev(hd);
            for (Eigen::Index j = 0; j < hd; ++j) {
                const double z = s.gates(j);
                const double cand = s.gates(2 * hd + j);
                dpre(2 * hd + j) = dh(j) * z * (1.0 - cand * cand);
                dh_prev(j) = dh(j) * (1.0 - z);
            }
            const Eigen::VectorXd dpre_h = dpre.segment(2 * hd, hd);
            const Eigen::VectorXd drh = p.recurrent_kernel.bottomRows(hd).transpose() * dpre_h;
            for (Eigen::Index j = 0; j < hd; ++j) {
                const double r = s.gates(hd + j);
                const double cand = s.gates(2 * hd + j);
                const double dz = dh(j) * (cand - s.h_prev(j));
                const double dr = drh(j) * s.h_prev(j);
                dpre(j) = dz * hard_sigmoid_grad(s.preact(j));
                dpre(hd + j) = dr * hard_sigmoid_grad(s.preact(hd + j));
                dh_prev(j) += drh(j) * r;
            }
            // kernel gradients: z and r blocks act on h_prev, candidate on r(.)h_prev
            grad.input_kernel.noalias() += dpre * s.x.transpose();
            grad.recurrent_kernel.topRows(2 * hd).noalias() +=
                dpre.head(2 * hd) * s.h_prev.transpose();
            grad.recurrent_kernel.bottomRows(hd).noalias() += dpre_h * s.rh.transpose();
            grad.bias += dpre;
            dh_prev.noalias() += p.recurrent_kernel.topRows(2 * hd).transpose() * dpre.head(2 * hd);
            dx.noalias() = p.input_kernel.transpose() * dpre;
            dh = std::move(dh_prev);
            break;
        }
        case CellKind::Rnn: {
            Eigen::VectorXd dpre(hd);
            for (Eigen::Index j = 0; j < hd; ++j)
                dpre(j) = dh(j) * (1.0 - s.h(j) * s.h(j));
            grad.input_kernel.noalias() += dpre * s.x.transpose();
            grad.recurrent_kernel.noalias() += dpre * s.h_prev.transpose();
            grad.bias += dpre;
            dh.noalias() = p.recurrent_kernel.transpose() * dpre;
            dx.noalias() = p.input_kernel.transpose() * dpre;
            break;
        }
    }
}

} // namespace

BpttResult bptt_gradients(const ModelConfig& config, const ModelParameters& params,
                          std::span<const std::vector<double>> windows,
                          std::span<const double> targets) {
    validate_shapes(config, params);
    if (windows.size() != targets.size())
        throw ConfigError("bptt_gradients: " + std::to_string(windows.size()) + " windows vs " +
                          std::to_string(targets.size()) + " targets");
    if (windows.empty()) throw ConfigError("bptt_gradients: empty batch");

    const CellKind kind = cell_kind(config.architecture);
    const std::size_t n_layers = config.num_layers();
    const std::size_t w = config.window_size;
    const double batch_n = static_cast<double>(windows.size());

    BpttResult out;
    out.gradients = zero_parameters(config);
    out.predictions.reserve(windows.size());

    // cache[l][t], reused across samples
    std::vector<std::vector<StepCache>> cache(n_layers, std::vector<StepCache>(w));

    double se_sum = 0.0;
    for (std::size_t n = 0; n < windows.size(); ++n) {
        const auto& window = windows[n];
        if (window.size() != w)
            throw ConfigError("bptt_gradients: sample " + std::to_string(n) +
                              " window length mismatch");

        // forward, recording every step
        for (std::size_t l = 0; l < n_layers; ++l) {
            const auto hd = static_cast<Eigen::Index>(config.hidden_units[l]);
            Eigen::VectorXd h = Eigen::VectorXd::Zero(hd);
            Eigen::VectorXd c = Eigen::VectorXd::Zero(hd);
            for (std::size_t t = 0; t < w; ++t) {
                Eigen::VectorXd input;
                if (l == 0) {
                    input.resize(1);
                    input(0) = window[t];
                } else {
                    input = cache[l - 1][t].h;
                }
                cache[l][t] = run_step(kind, params.layers[l], input, h, c);
                h = cache[l][t].h;
                if (kind == CellKind::Lstm) c = cache[l][t].c;
            }
        }
        const Eigen::VectorXd& h_final = cache[n_layers - 1][w - 1].h;
        const double pred = params.dense.weight.dot(h_final) + params.dense.bias;
        if (!std::isfinite(pred))
            throw NumericError("bptt_gradients: non-finite prediction at sample " +
                               std::to_string(n));
        out.predictions.push_back(pred);
        const double err = pred - targets[n];
        se_sum += err * err;

        // d(batch MSE)/d(pred); the 1/batch factor is folded in here so the
        // per-sample backward passes accumulate directly into batch gradients.
        const double dpred = 2.0 * err / batch_n;
        out.gradients.dense.weight.noalias() += dpred * h_final;
        out.gradients.dense.bias += dpred;

        // reverse pass, top layer first; dx per step feeds the layer below
        std::vector<std::vector<Eigen::VectorXd>> dx_below(
            n_layers, std::vector<Eigen::VectorXd>(w));
        for (std::size_t li = n_layers; li-- > 0;) {
            const auto hd = static_cast<Eigen::Index>(config.hidden_units[li]);
            Eigen::VectorXd dh_carry = Eigen::VectorXd::Zero(hd);
            Eigen::VectorXd dc_carry = Eigen::VectorXd::Zero(hd);
            Eigen::VectorXd dx;
            for (std::size_t t = w; t-- > 0;) {
                Eigen::VectorXd dh = dh_carry;
                if (li == n_layers - 1 && t == w - 1)
                    dh.noalias() += dpred * params.dense.weight;
                if (li < n_layers - 1) dh += dx_below[li][t];
                backward_step(kind, params.layers[li], cache[li][t], dh, dc_carry, dx,
                              out.gradients.layers[li]);
                dh_carry = std::move(dh); // backward_step rewrote dh as dh_prev
                if (li > 0) dx_below[li - 1][t] = dx;
            }
        }
    }

    out.batch_mse = se_sum / batch_n;
    if (!out.gradients.all_finite())
        throw NumericError("bptt_gradients: non-finite gradient in batch of " +
                           std::to_string(windows.size()));
    return out;
}

} // namespace rnnf
