// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rnnf/timeseries.hpp"

namespace rnnf {

/// The three cumulative series a region carries in the normalized input file.
struct RegionCumulative {
    TimeSeries confirmed;
    TimeSeries deceased;
    TimeSeries recovered;
};

struct CumulativeLoadResult {
    std::map<std::string, RegionCumulative> regions;
    std::vector<std::string> warnings; // e.g. cumulative counts revised downward
};

/// Loads the normalized multi-region file. Expected layout:
///   header `date,region,confirmed,deaths,recovered`, ISO-8601 dates,
///   one row per (date, region), rows chronological within each region.
/// Malformed rows raise ParseError with the line number; date gaps or
/// non-monotone dates within a region raise DataError. A cumulative value
/// decreasing is accepted (real feeds get revised) but recorded as a warning.
CumulativeLoadResult load_jhu_csv(const std::filesystem::path& path);

/// Loads a two-column `date,active` file into a single series. The region
/// name is not part of the file and must be supplied by the caller.
TimeSeries load_simple_csv(const std::filesystem::path& path, const std::string& region_label);

/// Shortest decimal form that parses back to the same double (std::to_chars).
std::string format_double(double v);

/// Writes a two-column CSV `date,<value_header>` alongside the series dates.
void write_dated_csv(const std::filesystem::path& path, const std::string& value_header,
                     const std::vector<Date>& dates, const std::vector<double>& values);

} // namespace rnnf
