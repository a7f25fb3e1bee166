// SPDX-License-Identifier: Apache-2.0
#include "rnnf/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rnnf/error.hpp"

namespace rnnf {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& field, long line_no, const std::string& column) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("cannot parse " + column + " value '" + field + "'", line_no);
    return v;
}

Date parse_date_field(const std::string& field, long line_no) {
    try {
        return Date::parse(field);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no);
    }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return in;
}

// Appends (date, value) to a series, enforcing chronological daily rows.
void append_row(TimeSeries& s, const Date& d, double v, const std::filesystem::path& path) {
    if (!s.dates.empty()) {
        const auto gap = days_between(s.dates.back(), d);
        if (gap <= 0)
            throw DataError("'" + path.string() + "': non-monotone dates for region '" +
                            s.region_name + "' (" + d.to_string() + " after " +
                            s.dates.back().to_string() + ")");
        if (gap != 1)
            throw DataError("'" + path.string() + "': region '" + s.region_name +
                            "' is missing " + s.dates.back().next_day().to_string());
    }
    s.dates.push_back(d);
    s.values.push_back(v);
}

} // namespace

CumulativeLoadResult load_jhu_csv(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line)) throw ParseError("'" + path.string() + "' is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,region,confirmed,deaths,recovered")
        throw ParseError("'" + path.string() + "': expected header "
                         "'date,region,confirmed,deaths,recovered', got '" + line + "'",
                         line_no);

    CumulativeLoadResult out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5)
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);

        const Date d = parse_date_field(fields[0], line_no);
        const std::string& region = fields[1];
        if (region.empty()) throw ParseError("empty region name", line_no);
        const double confirmed = parse_number(fields[2], line_no, "confirmed");
        const double deaths = parse_number(fields[3], line_no, "deaths");
        const double recovered = parse_number(fields[4], line_no, "recovered");

        auto [it, inserted] = out.regions.try_emplace(region);
        RegionCumulative& rc = it->second;
        if (inserted) {
            rc.confirmed.region_name = region;
            rc.deceased.region_name = region;
            rc.recovered.region_name = region;
        }
        const double prev_c = rc.confirmed.values.empty() ? 0.0 : rc.confirmed.values.back();
        const double prev_d = rc.deceased.values.empty() ? 0.0 : rc.deceased.values.back();
        const double prev_r = rc.recovered.values.empty() ? 0.0 : rc.recovered.values.back();
        const bool had_rows = !rc.confirmed.values.empty();

        append_row(rc.confirmed, d, confirmed, path);
        append_row(rc.deceased, d, deaths, path);
        append_row(rc.recovered, d, recovered, path);

        if (had_rows && (confirmed < prev_c || deaths < prev_d || recovered < prev_r))
            out.warnings.push_back("cumulative value decreased for '" + region + "' on " +
                                   d.to_string());
    }
    for (auto& [name, rc] : out.regions) {
        rc.confirmed.validate();
        rc.deceased.validate();
        rc.recovered.validate();
    }
    return out;
}

TimeSeries load_simple_csv(const std::filesystem::path& path, const std::string& region_label) {
    auto in = open_or_throw(path);
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line)) throw ParseError("'" + path.string() + "' is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,active")
        throw ParseError("'" + path.string() + "': expected header 'date,active', got '" +
                         line + "'", line_no);

    TimeSeries out;
    out.region_name = region_label;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), line_no);
        const Date d = parse_date_field(fields[0], line_no);
        const double v = parse_number(fields[1], line_no, "active");
        append_row(out, d, v, path);
    }
    out.validate();
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_dated_csv(const std::filesystem::path& path, const std::string& value_header,
                     const std::vector<Date>& dates, const std::vector<double>& values) {
    if (dates.size() != values.size())
        throw ConfigError("write_dated_csv: " + std::to_string(dates.size()) + " dates vs " +
                          std::to_string(values.size()) + " values");
    std::ofstream outf(path);
    if (!outf) throw DataError("cannot write '" + path.string() + "'");
    outf << "date," << value_header << "\n";
    for (std::size_t i = 0; i < dates.size(); ++i)
        outf << dates[i].to_string() << ',' << format_double(values[i]) << "\n";
}

} // namespace rnnf
