// SPDX-License-Identifier: Apache-2.0
#include "rnnf/windows.hpp"

#include "rnnf/error.hpp"

namespace rnnf {

WindowedDataset make_windows(const std::vector<double>& scaled_series, std::size_t w) {
    if (w == 0) throw ConfigError("make_windows: window size must be positive");
    if (scaled_series.size() <= w)
        throw DataError("make_windows: series of length " + std::to_string(scaled_series.size()) +
                        " cannot produce windows of size " + std::to_string(w) +
                        " with a one-step target");
    WindowedDataset out;
    out.window_size = w;
    const std::size_t n = scaled_series.size() - w;
    out.inputs.reserve(n);
    out.targets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.inputs.emplace_back(scaled_series.begin() + i, scaled_series.begin() + i + w);
        out.targets.push_back(scaled_series[i + w]);
    }
    return out;
}

} // namespace rnnf
