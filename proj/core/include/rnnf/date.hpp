// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace rnnf {

/// Proleptic Gregorian calendar date with day-level arithmetic.
///
/// Stored as (year, month, day); converted to a serial day count (days since
/// 1970-01-01) for arithmetic so that daily spacing checks and date offsets
/// are exact integer operations.
struct Date {
    int year = 1970;
    unsigned month = 1; // 1..12
    unsigned day = 1;   // 1..31

    static Date from_serial(std::int64_t days_since_epoch);
    std::int64_t to_serial() const;

    /// Parses strict ISO-8601 "YYYY-MM-DD". Throws ParseError otherwise.
    static Date parse(const std::string& text);
    std::string to_string() const;

    Date plus_days(std::int64_t n) const { return from_serial(to_serial() + n); }
    Date next_day() const { return plus_days(1); }

    friend bool operator==(const Date& a, const Date& b) = default;
    friend std::strong_ordering operator<=>(const Date& a, const Date& b) {
        return a.to_serial() <=> b.to_serial();
    }
};

/// Whole days from a to b (positive when b is later).
inline std::int64_t days_between(const Date& a, const Date& b) {
    return b.to_serial() - a.to_serial();
}

} // namespace rnnf
