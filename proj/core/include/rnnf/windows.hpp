// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace rnnf {

/// Sliding one-step-ahead windows over an already scaled series:
/// inputs[i] = series[i, i+w), targets[i] = series[i+w], chronological order.
struct WindowedDataset {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::size_t window_size = 0;

    std::size_t size() const { return targets.size(); }
};

/// Builds len - w samples. Throws DataError when len <= w.
WindowedDataset make_windows(const std::vector<double>& scaled_series, std::size_t w);

} // namespace rnnf
