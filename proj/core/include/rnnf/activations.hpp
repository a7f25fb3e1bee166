// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

namespace rnnf {

/// Block input/output activation.
inline double tanh_act(double x) { return std::tanh(x); }

/// d/dx tanh(x) expressed through the activation value y = tanh(x).
inline double tanh_grad_from_value(double y) { return 1.0 - y * y; }

/// Piecewise-linear recurrent (gate) activation: clamp(0.2 x + 0.5, 0, 1).
inline double hard_sigmoid(double x) {
    return std::clamp(0.2 * x + 0.5, 0.0, 1.0);
}

/// Derivative of hard_sigmoid w.r.t. its pre-activation: 0.2 on the linear
/// segment, 0 on the clamped tails.
inline double hard_sigmoid_grad(double x) {
    return (x > -2.5 && x < 2.5) ? 0.2 : 0.0;
}

} // namespace rnnf
