#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lonkit::csv {

/// Comma-separated table without quoting. Lines starting with '#' are
/// comments; the first non-comment line is the header.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws if absent
};

Table read(std::istream& in);
Table read_file(const std::string& path);

/// "NA" for missing values, %.17g otherwise.
std::string format(double v);
std::string format(const std::optional<double>& v);
std::optional<double> parse_optional(const std::string& cell);
double parse_double(const std::string& cell);
long long parse_int(const std::string& cell);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace lonkit::csv
