#include "chainnoise/units.hpp"

#include <array>
#include <charconv>
#include <string>

#include "chainnoise/errors.hpp"

namespace chainnoise::units {

namespace {

struct UnitName {
    std::string_view text;
    Unit unit;
};

// Longest names first so "dBm" wins over "dB" and "Ohm" is never split.
constexpr std::array<UnitName, 8> kUnits{{
    {"dBm", Unit::DbMilliwatt},
    {"Ohm", Unit::Ohms},
    {"Hz", Unit::Hertz},
    {"dB", Unit::Decibel},
    {"K", Unit::Kelvin},
    {"V", Unit::Volts},
    {"A", Unit::Amps},
    {"W", Unit::Watts},
}};

const char* unit_name(Unit u) {
    for (const auto& n : kUnits) {
        if (n.unit == u) return n.text.data();
    }
    return "?";
}

bool prefix_scale(std::string_view p, double& scale) {
    if (p == "a") scale = 1e-18;
    else if (p == "f") scale = 1e-15;
    else if (p == "p") scale = 1e-12;
    else if (p == "n") scale = 1e-9;
    else if (p == "u" || p == "\xC2\xB5") scale = 1e-6;  // ASCII u or UTF-8 micro sign
    else if (p == "m") scale = 1e-3;
    else if (p == "k") scale = 1e3;
    else if (p == "M") scale = 1e6;
    else if (p == "G") scale = 1e9;
    else if (p == "T") scale = 1e12;
    else return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_quantity(std::string_view text, Unit expected) {
    const std::string_view s = trim(text);
    if (s.empty()) throw ConfigError("empty quantity");

    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr == s.data()) {
        throw ConfigError("cannot parse quantity '" + std::string(text) + "'");
    }
    std::string_view tail = trim(s.substr(static_cast<std::size_t>(ptr - s.data())));
    if (tail.empty()) return value;  // bare number: already in the base unit

    for (const auto& un : kUnits) {
        if (tail.size() >= un.text.size() &&
            tail.substr(tail.size() - un.text.size()) == un.text) {
            if (un.unit != expected) {
                throw ConfigError("expected a quantity in " + std::string(unit_name(expected)) +
                                  ", got '" + std::string(text) + "'");
            }
            const std::string_view prefix = tail.substr(0, tail.size() - un.text.size());
            if (prefix.empty()) return value;
            if (un.unit == Unit::Decibel || un.unit == Unit::DbMilliwatt) {
                throw ConfigError("dB quantities take no SI prefix: '" + std::string(text) +
                                  "'");
            }
            double scale = 1.0;
            if (!prefix_scale(prefix, scale)) {
                throw ConfigError("unknown SI prefix '" + std::string(prefix) + "' in '" +
                                  std::string(text) + "'");
            }
            return value * scale;
        }
    }
    throw ConfigError("unknown unit in '" + std::string(text) + "' (expected " +
                      std::string(unit_name(expected)) + ")");
}

std::pair<double, double> parse_range(std::string_view text, Unit expected) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("range must look like lo:hi, got '" + std::string(text) + "'");
    }
    const double lo = parse_quantity(text.substr(0, colon), expected);
    const double hi = parse_quantity(text.substr(colon + 1), expected);
    if (!(lo < hi)) throw ConfigError("range must satisfy lo < hi");
    return {lo, hi};
}

}  // namespace chainnoise::units
