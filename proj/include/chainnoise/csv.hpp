#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace chainnoise::csv {

// Minimal comma-separated dialect: UTF-8, header row, '.' decimal point,
// no quoting (all payloads are numbers or plain identifiers).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;  // throws ConfigError
};

Table read(std::istream& in);
void require_columns(const Table& t, const std::vector<std::string>& names);
std::vector<double> column_as_double(const Table& t, const std::string& name);

// Shortest round-trip decimal representation.
std::string num(double v);

}  // namespace chainnoise::csv
