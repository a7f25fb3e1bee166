// SPDX-License-Identifier: Apache-2.0
#include "rnnf/scaler.hpp"

#include <algorithm>

#include "rnnf/error.hpp"

namespace rnnf {

ScalerParams fit_scaler(const std::vector<double>& values) {
    if (values.size() < 2) throw DataError("fit_scaler: need at least 2 values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi)
        throw DataError("fit_scaler: constant series (all values " + std::to_string(*lo) +
                        "), scaler would be degenerate");
    return ScalerParams{*lo, *hi};
}

ScalerParams fit_scaler(const TimeSeries& series) {
    try {
        return fit_scaler(series.values);
    } catch (const DataError& e) {
        throw DataError("region '" + series.region_name + "': " + e.what());
    }
}

static void require_valid(const ScalerParams& p) {
    if (!p.valid()) throw DataError("invalid scaler: x_max must exceed x_min");
}

double transform(double x, const ScalerParams& p) {
    require_valid(p);
    return (x - p.x_min) / (p.x_max - p.x_min);
}

std::vector<double> transform(const std::vector<double>& xs, const ScalerParams& p) {
    require_valid(p);
    std::vector<double> out(xs.size());
    const double range = p.x_max - p.x_min;
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - p.x_min) / range;
    return out;
}

double inverse_transform(double scaled, const ScalerParams& p) {
    require_valid(p);
    return p.x_min + scaled * (p.x_max - p.x_min);
}

std::vector<double> inverse_transform(const std::vector<double>& scaled, const ScalerParams& p) {
    require_valid(p);
    std::vector<double> out(scaled.size());
    const double range = p.x_max - p.x_min;
    for (std::size_t i = 0; i < scaled.size(); ++i) out[i] = p.x_min + scaled[i] * range;
    return out;
}

} // namespace rnnf
