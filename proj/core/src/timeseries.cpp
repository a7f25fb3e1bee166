// SPDX-License-Identifier: Apache-2.0
#include "rnnf/timeseries.hpp"

#include <cmath>

#include "rnnf/error.hpp"

namespace rnnf {

std::optional<std::size_t> TimeSeries::index_of(const Date& d) const {
    if (empty()) return std::nullopt;
    const std::int64_t off = days_between(start_date(), d);
    if (off < 0 || off >= static_cast<std::int64_t>(size())) return std::nullopt;
    return static_cast<std::size_t>(off);
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t last) const {
    TimeSeries out;
    out.region_name = region_name;
    out.dates.assign(dates.begin() + first, dates.begin() + last);
    out.values.assign(values.begin() + first, values.begin() + last);
    return out;
}

void TimeSeries::validate() const {
    if (dates.size() != values.size())
        throw DataError("series '" + region_name + "': " + std::to_string(dates.size()) +
                        " dates but " + std::to_string(values.size()) + " values");
    for (std::size_t i = 1; i < dates.size(); ++i) {
        const auto gap = days_between(dates[i - 1], dates[i]);
        if (gap != 1)
            throw DataError("series '" + region_name + "': expected " +
                            dates[i - 1].next_day().to_string() + " after " +
                            dates[i - 1].to_string() + ", got " + dates[i].to_string());
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw DataError("series '" + region_name + "': non-finite value at " +
                            dates[i].to_string());
    }
}

std::pair<TimeSeries, TimeSeries> split_by_date(const TimeSeries& series, const SplitSpec& spec) {
    series.validate();
    const auto idx = series.index_of(spec.train_end_date);
    if (!idx)
        throw DataError("split date " + spec.train_end_date.to_string() +
                        " outside series range " + series.start_date().to_string() + ".." +
                        series.end_date().to_string());
    const std::size_t cut = *idx + 1; // train_end_date inclusive
    if (cut >= series.size())
        throw DataError("split date " + spec.train_end_date.to_string() +
                        " leaves an empty test range");
    return {series.slice(0, cut), series.slice(cut, series.size())};
}

ActiveSeriesResult compute_active(const TimeSeries& confirmed, const TimeSeries& deceased,
                                  const TimeSeries& recovered) {
    if (confirmed.dates != deceased.dates || confirmed.dates != recovered.dates)
        throw DataError("compute_active: date vectors differ for region '" +
                        confirmed.region_name + "'");
    ActiveSeriesResult out;
    out.series.region_name = confirmed.region_name;
    out.series.dates = confirmed.dates;
    out.series.values.resize(confirmed.size());
    for (std::size_t i = 0; i < confirmed.size(); ++i) {
        const double v = confirmed.values[i] - deceased.values[i] - recovered.values[i];
        out.series.values[i] = v;
        if (v < 0.0)
            out.warnings.push_back("negative active count " + std::to_string(v) + " for '" +
                                   confirmed.region_name + "' on " +
                                   confirmed.dates[i].to_string());
    }
    return out;
}

} // namespace rnnf
