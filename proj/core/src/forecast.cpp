// SPDX-License-Identifier: Apache-2.0
#include "rnnf/forecast.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "rnnf/csv_io.hpp"
#include "rnnf/error.hpp"

namespace rnnf {

using nlohmann::json;

Forecast recursive_forecast(const Predictor& predict, std::size_t window_size,
                            const ScalerParams& scaler, const TimeSeries& series,
                            std::size_t horizon, const std::string& model_descriptor) {
    series.validate();
    if (horizon == 0) throw ConfigError("recursive_forecast: horizon must be >= 1");
    if (series.size() < window_size)
        throw DataError("recursive_forecast: series of length " + std::to_string(series.size()) +
                        " cannot seed a window of " + std::to_string(window_size));

    Forecast out;
    out.region_name = series.region_name;
    out.model_descriptor = model_descriptor;
    out.horizon = horizon;

    const std::size_t seed_from = series.size() - window_size;
    out.seed_dates.assign(series.dates.begin() + seed_from, series.dates.end());
    std::vector<double> window(window_size);
    for (std::size_t i = 0; i < window_size; ++i)
        window[i] = transform(series.values[seed_from + i], scaler);
    out.seed_window = window;

    out.dates.reserve(horizon);
    out.values.reserve(horizon);
    Date day = series.end_date();
    for (std::size_t k = 1; k <= horizon; ++k) {
        const double y = predict(window);
        const double denormalized = inverse_transform(y, scaler);
        // denormalization can overflow on its own when the scaler range is large
        if (!std::isfinite(y) || !std::isfinite(denormalized))
            throw NumericError("recursive_forecast: non-finite prediction at step " +
                               std::to_string(k));
        if (y < 0.0)
            out.warnings.push_back("scaled prediction " + format_double(y) +
                                   " below zero at step " + std::to_string(k));
        day = day.next_day();
        out.dates.push_back(day);
        out.values.push_back(denormalized);
        // shift-left, append the prediction
        for (std::size_t i = 0; i + 1 < window_size; ++i) window[i] = window[i + 1];
        window[window_size - 1] = y;
    }
    return out;
}

Forecast recursive_forecast(const ModelBundle& model, const ScalerParams& scaler,
                            const TimeSeries& series, std::size_t horizon) {
    return recursive_forecast(model_predictor(model.config, model.params),
                              model.config.window_size, scaler, series, horizon,
                              model.config.descriptor());
}

EvalForecastResult evaluate_then_forecast(const ModelBundle& model, const ScalerParams& scaler,
                                          const TimeSeries& series, const Date& test_start_date,
                                          std::size_t horizon) {
    series.validate();
    const auto idx = series.index_of(test_start_date);
    if (!idx)
        throw DataError("evaluate_then_forecast: test start " + test_start_date.to_string() +
                        " outside series range");
    EvalForecastResult out;
    out.report = evaluate_one_step(model_predictor(model.config, model.params),
                                   model.config.window_size, scaler, series, *idx,
                                   Approach::Transfer, model.config.descriptor());
    out.forecast = recursive_forecast(model, scaler, series, horizon);
    return out;
}

void write_forecast_csv(const Forecast& forecast, const std::filesystem::path& path) {
    write_dated_csv(path, "forecast_active_cases", forecast.dates, forecast.values);
}

void write_forecast_json(const Forecast& forecast, const std::filesystem::path& path) {
    std::vector<std::string> seed_dates, dates;
    for (const auto& d : forecast.seed_dates) seed_dates.push_back(d.to_string());
    for (const auto& d : forecast.dates) dates.push_back(d.to_string());
    const json j{{"region", forecast.region_name},
                 {"model", forecast.model_descriptor},
                 {"horizon", forecast.horizon},
                 {"seed_dates", std::move(seed_dates)},
                 {"seed_window_scaled", forecast.seed_window},
                 {"dates", std::move(dates)},
                 {"values", forecast.values},
                 {"warnings", forecast.warnings}};
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << j.dump(2) << "\n";
}

} // namespace rnnf
