// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace rnnf {

/// Mean squared error. Throws DataError on empty or mismatched inputs.
double mse(std::span<const double> predicted, std::span<const double> actual);

/// Mean absolute error, same contract.
double mae(std::span<const double> predicted, std::span<const double> actual);

} // namespace rnnf
