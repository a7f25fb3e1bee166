// SPDX-License-Identifier: Apache-2.0
#include "rnnf/explain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "rnnf/csv_io.hpp"
#include "rnnf/error.hpp"
#include "rnnf/network.hpp"

namespace rnnf {

using nlohmann::json;

ActivationTrace capture_trace(const ModelConfig& config, const ModelParameters& params,
                              const ScalerParams& scaler, const TimeSeries& series,
                              std::size_t test_start) {
    series.validate();
    validate_shapes(config, params);
    const std::size_t w = config.window_size;
    if (test_start < w)
        throw DataError("capture_trace: test start " + std::to_string(test_start) +
                        " leaves fewer than " + std::to_string(w) + " seed values");
    if (test_start >= series.size()) throw DataError("capture_trace: test start beyond series end");

    const std::vector<double> scaled = transform(series.values, scaler);
    const std::size_t t_days = series.size() - test_start;
    const std::size_t h_units = config.hidden_units.back();

    ActivationTrace trace;
    trace.region_name = series.region_name;
    trace.model_descriptor = config.descriptor();
    trace.matrix.resize(static_cast<Eigen::Index>(t_days), static_cast<Eigen::Index>(h_units));
    trace.dates.reserve(t_days);

    for (std::size_t t = test_start; t < series.size(); ++t) {
        const std::span<const double> window(scaled.data() + (t - w), w);
        const ForwardResult r = forward(config, params, window, /*capture=*/true);
        trace.matrix.row(static_cast<Eigen::Index>(t - test_start)) =
            r.final_layer_trace.back().transpose();
        trace.dates.push_back(series.dates[t]);
    }
    return trace;
}

Envelope extract_envelope(const ActivationTrace& trace, DayRange range, bool absolute) {
    const std::size_t t_days = trace.days();
    if (t_days == 0) throw DataError("extract_envelope: empty trace");
    if (range.first > range.last || range.last >= t_days)
        throw DataError("extract_envelope: day range [" + std::to_string(range.first) + ", " +
                        std::to_string(range.last) + "] invalid for a " + std::to_string(t_days) +
                        "-day trace");

    Envelope env;
    env.day_range = range;
    env.absolute = absolute;
    env.max_series.resize(t_days);
    env.min_series.resize(t_days);
    for (std::size_t t = 0; t < t_days; ++t) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < trace.units(); ++j) {
            double v = trace.matrix(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
            if (absolute) v = std::abs(v);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        env.min_series[t] = lo;
        env.max_series[t] = hi;
    }
    return env;
}

namespace {

// Three-stop linear color map (cool gray-blue .. light gray .. warm red).
void map_color(double t, unsigned char rgb[3]) {
    static constexpr double stops[3][3] = {
        {0.231, 0.298, 0.753}, {0.865, 0.865, 0.865}, {0.706, 0.016, 0.150}};
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * 2.0;
    const int seg = pos < 1.0 ? 0 : 1;
    const double f = pos - seg;
    for (int k = 0; k < 3; ++k) {
        const double v = stops[seg][k] + f * (stops[seg + 1][k] - stops[seg][k]);
        rgb[k] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
}

std::string unit_column_name(std::size_t j, int width) {
    std::string digits = std::to_string(j);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return "u" + digits;
}

} // namespace

HeatmapFiles export_heatmap(const ActivationTrace& trace, const std::filesystem::path& base_path,
                            int cell_scale) {
    if (trace.days() == 0 || trace.units() == 0) throw DataError("export_heatmap: empty trace");
    if (cell_scale < 1) throw ConfigError("export_heatmap: cell_scale must be >= 1");

    HeatmapFiles files;
    files.csv = base_path;
    files.csv += ".csv";
    files.image = base_path;
    files.image += ".ppm";
    files.sidecar = base_path;
    files.sidecar += ".json";

    const int name_width = std::max<int>(3, static_cast<int>(std::to_string(trace.units() - 1).size()));
    {
        std::ofstream csv(files.csv);
        if (!csv) throw DataError("cannot write '" + files.csv.string() + "'");
        csv << "date";
        for (std::size_t j = 0; j < trace.units(); ++j) csv << ',' << unit_column_name(j, name_width);
        csv << "\n";
        for (std::size_t t = 0; t < trace.days(); ++t) {
            csv << trace.dates[t].to_string();
            for (std::size_t j = 0; j < trace.units(); ++j)
                csv << ','
                    << format_double(trace.matrix(static_cast<Eigen::Index>(t),
                                                  static_cast<Eigen::Index>(j)));
            csv << "\n";
        }
    }

    const double lo = trace.matrix.minCoeff();
    const double hi = trace.matrix.maxCoeff();
    const double span = hi - lo;
    const std::size_t width = trace.units() * static_cast<std::size_t>(cell_scale);
    const std::size_t height = trace.days() * static_cast<std::size_t>(cell_scale);
    {
        std::ofstream img(files.image, std::ios::binary);
        if (!img) throw DataError("cannot write '" + files.image.string() + "'");
        img << "P6\n" << width << ' ' << height << "\n255\n";
        std::vector<unsigned char> row(width * 3);
        for (std::size_t y = 0; y < height; ++y) {
            const std::size_t t = y / static_cast<std::size_t>(cell_scale);
            for (std::size_t x = 0; x < width; ++x) {
                const std::size_t j = x / static_cast<std::size_t>(cell_scale);
                const double v =
                    trace.matrix(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
                const double pos = span > 0.0 ? (v - lo) / span : 0.5;
                map_color(pos, &row[x * 3]);
            }
            img.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size()));
        }
    }

    const json sidecar{{"region", trace.region_name},
                       {"model", trace.model_descriptor},
                       {"rows_days", trace.days()},
                       {"cols_units", trace.units()},
                       {"image", {{"format", "ppm-p6"},
                                  {"width", width},
                                  {"height", height},
                                  {"cell_scale", cell_scale}}},
                       {"color_map", {{"kind", "linear-3-stop"},
                                      {"value_min", lo},
                                      {"value_max", hi},
                                      {"stops", {"#3b4cc0", "#dddddd", "#b40426"}}}},
                       {"first_date", trace.dates.front().to_string()},
                       {"last_date", trace.dates.back().to_string()}};
    std::ofstream side(files.sidecar);
    if (!side) throw DataError("cannot write '" + files.sidecar.string() + "'");
    side << sidecar.dump(2) << "\n";
    return files;
}

namespace {

struct LagResult {
    long lag = 0;
    double corr = 0.0;
};

double pearson_at_lag(std::span<const double> a, std::span<const double> b, long lag) {
    const long n = static_cast<long>(a.size());
    const long t0 = std::max(0L, -lag);
    const long t1 = std::min(n, n - lag);
    const long m = t1 - t0;
    if (m < 2) return 0.0;
    double mean_a = 0.0, mean_b = 0.0;
    for (long t = t0; t < t1; ++t) {
        mean_a += a[static_cast<std::size_t>(t)];
        mean_b += b[static_cast<std::size_t>(t + lag)];
    }
    mean_a /= static_cast<double>(m);
    mean_b /= static_cast<double>(m);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (long t = t0; t < t1; ++t) {
        const double da = a[static_cast<std::size_t>(t)] - mean_a;
        const double db = b[static_cast<std::size_t>(t + lag)] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

// Scans lags 0, +1, -1, +2, -2, ... so ties resolve to the smallest shift.
LagResult best_lag(std::span<const double> a, std::span<const double> b, long max_lag) {
    LagResult best{0, pearson_at_lag(a, b, 0)};
    for (long k = 1; k <= max_lag; ++k) {
        for (const long lag : {k, -k}) {
            const double c = pearson_at_lag(a, b, lag);
            if (c > best.corr) best = {lag, c};
        }
    }
    return best;
}

} // namespace

DriftReport compare_envelopes(const Envelope& env_a, const Envelope& env_b,
                              const TimeSeries& actual, const ScalerParams& scaler,
                              long max_lag) {
    if (env_a.max_series.size() != env_b.max_series.size() ||
        env_a.max_series.size() != actual.size())
        throw DataError("compare_envelopes: envelope/actual lengths differ");
    if (env_a.day_range.first != env_b.day_range.first ||
        env_a.day_range.last != env_b.day_range.last)
        throw DataError("compare_envelopes: analysis windows differ");
    const std::size_t first = env_a.day_range.first;
    const std::size_t len = env_a.day_range.last - first + 1;
    if (env_a.day_range.last >= env_a.max_series.size())
        throw DataError("compare_envelopes: analysis window exceeds envelope length");

    const std::vector<double> actual_scaled = transform(actual.values, scaler);
    const std::span<const double> a(env_a.max_series.data() + first, len);
    const std::span<const double> b(env_b.max_series.data() + first, len);
    const std::span<const double> y(actual_scaled.data() + first, len);

    if (max_lag <= 0) max_lag = static_cast<long>(len) / 4;
    max_lag = std::min(max_lag, static_cast<long>(len) - 1);

    DriftReport report;
    const LagResult ra = best_lag(y, a, max_lag);
    const LagResult rb = best_lag(y, b, max_lag);
    const LagResult rba = best_lag(a, b, max_lag);
    report.lag_a_vs_actual = ra.lag;
    report.corr_a_vs_actual = ra.corr;
    report.lag_b_vs_actual = rb.lag;
    report.corr_b_vs_actual = rb.corr;
    report.lag_b_vs_a = rba.lag;
    report.corr_b_vs_a = rba.corr;

    const auto peak_a = std::max_element(a.begin(), a.end());
    const auto peak_b = std::max_element(b.begin(), b.end());
    report.peak_shift_days = static_cast<long>(peak_b - b.begin()) -
                             static_cast<long>(peak_a - a.begin());
    return report;
}

void write_envelope_csv(const Envelope& env, const std::vector<Date>& dates,
                        const std::filesystem::path& path) {
    if (dates.size() != env.max_series.size())
        throw ConfigError("write_envelope_csv: date/series length mismatch");
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << "date,unit_min,unit_max,in_analysis_window\n";
    for (std::size_t t = 0; t < dates.size(); ++t) {
        const bool in_window = t >= env.day_range.first && t <= env.day_range.last;
        outf << dates[t].to_string() << ',' << format_double(env.min_series[t]) << ','
             << format_double(env.max_series[t]) << ',' << (in_window ? 1 : 0) << "\n";
    }
}

void write_drift_json(const DriftReport& report, const std::filesystem::path& path) {
    const json j{{"lag_a_vs_actual", report.lag_a_vs_actual},
                 {"corr_a_vs_actual", report.corr_a_vs_actual},
                 {"lag_b_vs_actual", report.lag_b_vs_actual},
                 {"corr_b_vs_actual", report.corr_b_vs_actual},
                 {"lag_b_vs_a", report.lag_b_vs_a},
                 {"corr_b_vs_a", report.corr_b_vs_a},
                 {"peak_shift_days", report.peak_shift_days}};
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << j.dump(2) << "\n";
}

} // namespace rnnf
