#pragma once

#include <string_view>
#include <utility>

namespace chainnoise::units {

enum class Unit { Hertz, Kelvin, Volts, Amps, Watts, Ohms, Decibel, DbMilliwatt };

// Parses "<number>[<prefix>]<unit>" or a bare number (taken as the base
// unit). Prefixes: a f p n u µ m k M G T. dB and dBm take no prefix.
// Examples: "4.5GHz" -> 4.5e9, "-30dBm" -> -30, "0.7mA" -> 7e-4, "30mK" -> 0.03.
// Throws ConfigError on malformed text or a unit of the wrong kind.
double parse_quantity(std::string_view text, Unit expected);

// "lo:hi" with each side in the given unit.
std::pair<double, double> parse_range(std::string_view text, Unit expected);

}  // namespace chainnoise::units
