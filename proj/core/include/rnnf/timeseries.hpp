// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rnnf/date.hpp"

namespace rnnf {

/// Dated, named univariate daily series (e.g. active cases per day for one
/// region). Dates are strictly increasing with exact daily spacing and the
/// value vector has the same length as the date vector.
struct TimeSeries {
    std::string region_name;
    std::vector<Date> dates;
    std::vector<double> values;

    std::size_t size() const { return dates.size(); }
    bool empty() const { return dates.empty(); }
    const Date& start_date() const { return dates.front(); }
    const Date& end_date() const { return dates.back(); }

    /// Index of `d`, or nullopt when the date is outside the series range.
    std::optional<std::size_t> index_of(const Date& d) const;

    /// Copy of the [first, last) index range, keeping the region name.
    TimeSeries slice(std::size_t first, std::size_t last) const;

    /// Throws DataError unless all invariants hold (daily spacing, aligned
    /// lengths, finite values).
    void validate() const;
};

/// How to cut a series into train and test portions.
struct SplitSpec {
    Date train_end_date;               // last day included in training
    double validation_fraction = 0.10; // chronological tail of the training windows
};

/// Cuts at the split date: train covers start..train_end_date inclusive, test
/// the remainder. Throws DataError when the date falls outside the series or
/// would leave either side empty.
std::pair<TimeSeries, TimeSeries> split_by_date(const TimeSeries& series, const SplitSpec& spec);

struct ActiveSeriesResult {
    TimeSeries series;
    std::vector<std::string> warnings; // e.g. negative active counts from data revisions
};

/// active[t] = confirmed[t] - deceased[t] - recovered[t]. The three inputs
/// must share identical date vectors. Negative results are kept and flagged
/// as warnings, not errors: cumulative feeds get revised downward in the wild.
ActiveSeriesResult compute_active(const TimeSeries& confirmed, const TimeSeries& deceased,
                                  const TimeSeries& recovered);

} // namespace rnnf
