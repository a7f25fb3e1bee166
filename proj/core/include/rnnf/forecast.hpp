// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rnnf/evaluate.hpp"

namespace rnnf {

/// Recursive multi-day rollout: every prediction is pushed back into the
/// input window, so step k sees the last w elements of
/// (seed ++ predictions 1..k-1) exactly.
struct Forecast {
    std::string region_name;
    std::string model_descriptor;
    std::vector<Date> seed_dates;    // the last w actual days
    std::vector<double> seed_window; // their scaled values
    std::size_t horizon = 0;
    std::vector<Date> dates;    // horizon days continuing daily from the seed
    std::vector<double> values; // denormalized case counts
    std::vector<std::string> warnings; // e.g. predictions below the scaled zero
};

/// Rolls the model `horizon` days past the series end. Predictions are not
/// clamped to the scaler's [0,1] range; spikes beyond the historical
/// maximum must stay representable; negative scaled values are flagged in
/// the warnings instead. Throws NumericError (with the step index) when the
/// rollout produces a non-finite value.
Forecast recursive_forecast(const Predictor& predict, std::size_t window_size,
                            const ScalerParams& scaler, const TimeSeries& series,
                            std::size_t horizon, const std::string& model_descriptor);

Forecast recursive_forecast(const ModelBundle& model, const ScalerParams& scaler,
                            const TimeSeries& series, std::size_t horizon);

struct EvalForecastResult {
    EvaluationReport report;
    Forecast forecast;
};

/// Teacher-forced one-step evaluation from test_start_date through the series
/// end, then a recursive forecast for `horizon` further days, both under the
/// given scaler (typically refit on the target series when the model comes
/// from another region).
EvalForecastResult evaluate_then_forecast(const ModelBundle& model, const ScalerParams& scaler,
                                          const TimeSeries& series, const Date& test_start_date,
                                          std::size_t horizon);

/// `date,forecast_active_cases` rows.
void write_forecast_csv(const Forecast& forecast, const std::filesystem::path& path);
void write_forecast_json(const Forecast& forecast, const std::filesystem::path& path);

} // namespace rnnf
