// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <unistd.h>
#include <vector>

#include "rnnf/csv_io.hpp"
#include "rnnf/timeseries.hpp"

namespace fixtures {

inline rnnf::TimeSeries make_series(std::string region, rnnf::Date start,
                                    std::vector<double> values) {
    rnnf::TimeSeries s;
    s.region_name = std::move(region);
    s.values = std::move(values);
    s.dates.reserve(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.dates.push_back(start.plus_days(static_cast<std::int64_t>(i)));
    return s;
}

/// Epidemic-looking curve: baseline plus two gaussian waves. Positive
/// everywhere, deterministic, wave positions configurable per region.
inline std::vector<double> wave_values(std::size_t n, double amp1, double center1, double width1,
                                       double amp2, double center2, double width2,
                                       double baseline = 50.0) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        const double g1 = amp1 * std::exp(-std::pow((x - center1) / width1, 2.0));
        const double g2 = amp2 * std::exp(-std::pow((x - center2) / width2, 2.0));
        v[t] = std::round(baseline + g1 + g2);
    }
    return v;
}

inline std::vector<double> sine_values(std::size_t n, double amplitude = 1.0,
                                       double period = 40.0, double offset = 2.0) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t)
        v[t] = offset + amplitude * std::sin(2.0 * M_PI * static_cast<double>(t) / period);
    return v;
}

/// Writes a normalized multi-region cumulative file whose derived active
/// series reproduce the given curves exactly: confirmed accumulates the
/// active counts, deaths stay zero, recovered = confirmed - active.
inline void write_jhu_fixture(const std::filesystem::path& path,
                              const std::map<std::string, rnnf::TimeSeries>& active_by_region) {
    std::ofstream out(path);
    out << "date,region,confirmed,deaths,recovered\n";
    for (const auto& [region, series] : active_by_region) {
        double cum = 1000.0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            cum += series.values[i];
            out << series.dates[i].to_string() << ',' << region << ','
                << rnnf::format_double(cum) << ",0,"
                << rnnf::format_double(cum - series.values[i]) << "\n";
        }
    }
}

inline void write_simple_fixture(const std::filesystem::path& path, const rnnf::TimeSeries& s) {
    std::ofstream out(path);
    out << "date,active\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << s.dates[i].to_string() << ',' << rnnf::format_double(s.values[i]) << "\n";
}

/// Fresh scratch directory under the system temp dir, unique per call.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("rnnf_test_" + tag + "_" + std::to_string(++counter) + "_" +
                      std::to_string(static_cast<unsigned>(::getpid())));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fixtures
