// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rnnf/model.hpp"
#include "rnnf/scaler.hpp"
#include "rnnf/timeseries.hpp"

namespace rnnf {

/// Final recurrent layer's last-step hidden output for every evaluated test
/// day: row t belongs to test day t, column j to hidden unit j. Same
/// teacher-forced windows and date alignment as evaluate_one_step.
struct ActivationTrace {
    Eigen::MatrixXd matrix; // T x H
    std::vector<Date> dates;
    std::string region_name;
    std::string model_descriptor;

    std::size_t days() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t units() const { return static_cast<std::size_t>(matrix.cols()); }
};

ActivationTrace capture_trace(const ModelConfig& config, const ModelParameters& params,
                              const ScalerParams& scaler, const TimeSeries& series,
                              std::size_t test_start);

/// Inclusive index window into the trace rows.
struct DayRange {
    std::size_t first = 0;
    std::size_t last = 0;
};

/// Per-day extremes of the trace across hidden units, over the full trace
/// length; the analysis window is carried as an annotation. With `absolute`
/// the extremes are taken over |entry| instead of the signed values.
struct Envelope {
    std::vector<double> max_series;
    std::vector<double> min_series;
    DayRange day_range;
    bool absolute = false;
};

Envelope extract_envelope(const ActivationTrace& trace, DayRange range, bool absolute = false);

struct HeatmapFiles {
    std::filesystem::path csv;
    std::filesystem::path image;
    std::filesystem::path sidecar;
};

/// Writes the raw matrix as CSV (`date,u000..`), a PPM raster with a linear
/// three-stop color map from the matrix minimum to its maximum (cell_scale
/// pixels per matrix entry), and a sidecar JSON describing dimensions and
/// the color mapping. Paths derive from `base_path` by extension.
HeatmapFiles export_heatmap(const ActivationTrace& trace, const std::filesystem::path& base_path,
                            int cell_scale = 2);

/// Quantified drift between two envelopes and the actual trend, all within
/// the (shared) analysis window. Lags are in days; a positive lag means the
/// second sequence trails the first. Correlations are Pearson coefficients
/// over the overlapping slice at the best lag.
struct DriftReport {
    long lag_a_vs_actual = 0;
    double corr_a_vs_actual = 0.0;
    long lag_b_vs_actual = 0;
    double corr_b_vs_actual = 0.0;
    long lag_b_vs_a = 0;
    double corr_b_vs_a = 0.0;
    long peak_shift_days = 0; // argmax(b.max) - argmax(a.max) inside the window
};

/// Cross-correlates each envelope's max_series against the scaled actual
/// series and against each other. `actual` must be aligned one value per
/// trace day. max_lag 0 means a quarter of the window length.
DriftReport compare_envelopes(const Envelope& env_a, const Envelope& env_b,
                              const TimeSeries& actual, const ScalerParams& scaler,
                              long max_lag = 0);

void write_envelope_csv(const Envelope& env, const std::vector<Date>& dates,
                        const std::filesystem::path& path);
void write_drift_json(const DriftReport& report, const std::filesystem::path& path);

} // namespace rnnf
