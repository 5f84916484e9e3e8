#include "chainnoise/csv.hpp"

#include <charconv>
#include <istream>
#include <system_error>

#include "chainnoise/errors.hpp"

namespace chainnoise::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ConfigError("CSV is missing required column '" + name + "'");
}

Table read(std::istream& in) {
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != t.header.size()) {
                throw ConfigError("CSV row has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(fields));
        }
    }
    if (first) throw ConfigError("CSV is empty (missing header row)");
    return t;
}

void require_columns(const Table& t, const std::vector<std::string>& names) {
    for (const auto& n : names) (void)t.column_index(n);
}

std::vector<double> column_as_double(const Table& t, const std::string& name) {
    const std::size_t col = t.column_index(name);
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        const std::string& s = row[col];
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ConfigError("CSV column '" + name + "': cannot parse '" + s +
                              "' as a number");
        }
        out.push_back(v);
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace chainnoise::csv
