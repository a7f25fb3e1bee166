// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "rnnf/timeseries.hpp"

namespace rnnf {

/// Fitted min/max pair for the [0,1] rescaling and its inverse.
struct ScalerParams {
    double x_min = 0.0;
    double x_max = 1.0;

    bool valid() const { return x_max > x_min; }
};

/// Fits on the series values: x_min = min, x_max = max. A constant series
/// makes the transform degenerate and raises DataError.
ScalerParams fit_scaler(const TimeSeries& series);
ScalerParams fit_scaler(const std::vector<double>& values);

/// (x - x_min) / (x_max - x_min). Out-of-range inputs are allowed and map
/// outside [0,1]; a pretrained scaler routinely meets larger values.
double transform(double x, const ScalerParams& p);
std::vector<double> transform(const std::vector<double>& xs, const ScalerParams& p);

/// Inverse of transform: x_min + s * (x_max - x_min).
double inverse_transform(double scaled, const ScalerParams& p);
std::vector<double> inverse_transform(const std::vector<double>& scaled, const ScalerParams& p);

} // namespace rnnf
