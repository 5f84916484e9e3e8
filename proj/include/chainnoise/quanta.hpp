#pragma once

#include <cmath>

#include "chainnoise/constants.hpp"
#include "chainnoise/types.hpp"

namespace chainnoise {

// Two temperature <-> occupancy conventions coexist and must not be confused:
//
//  * thermal_occupancy: the physical occupancy of a thermal bath,
//    n = (1/2) coth(hf / 2kT). Use this for bath noise entering a lossy stage
//    or a Johnson-noise source. Limit n -> 1/2 as T -> 0.
//
//  * occupancy_to_temperature / occupancy_from_temperature: the linear
//    reporting convention T = n hf / k used to quote noise temperatures.
//    This is NOT the inverse of thermal_occupancy.

namespace raw {

// (1/2) coth(hf / 2kT), with the T = 0 limit handled explicitly.
inline double thermal_occupancy(double t_kelvin, double f_hz) {
    if (t_kelvin == 0.0) return constants::vacuum_quanta;
    const double x = constants::planck_h * f_hz / (2.0 * constants::boltzmann_k * t_kelvin);
    return 0.5 / std::tanh(x);
}

inline double occupancy_to_kelvin(double quanta, double f_hz) {
    return quanta * constants::planck_h * f_hz / constants::boltzmann_k;
}

inline double kelvin_to_occupancy(double kelvin, double f_hz) {
    return kelvin * constants::boltzmann_k / (constants::planck_h * f_hz);
}

// x coth(x): even, >= 1, stable for all finite x (series below 1e-4).
inline double xcoth(double x) {
    const double a = std::fabs(x);
    if (a < 1e-4) {
        const double a2 = a * a;
        return 1.0 + a2 / 3.0 - a2 * a2 / 45.0;
    }
    if (a > 350.0) return a;  // coth saturates; avoids sinh overflow in derivatives
    return a / std::tanh(a);
}

// d/dx [x coth(x)] = coth(x) - x / sinh(x)^2, odd in x.
inline double xcoth_deriv(double x) {
    const double a = std::fabs(x);
    const double sign = (x < 0.0) ? -1.0 : 1.0;
    if (a < 1e-4) {
        return sign * (2.0 * a / 3.0 - 4.0 * a * a * a / 45.0);
    }
    if (a > 350.0) return sign;
    const double s = std::sinh(a);
    return sign * (std::cosh(a) / s - a / (s * s));
}

// (x / sinh x)^2 = x^2 (coth^2 x - 1): the temperature-sensitivity kernel.
inline double inv_sinh_sq_x2(double x) {
    const double a = std::fabs(x);
    if (a < 1e-4) {
        const double a2 = a * a;
        return 1.0 - a2 / 3.0 + a2 * a2 * (2.0 / 15.0);
    }
    if (a > 350.0) return 0.0;
    const double r = a / std::sinh(a);
    return r * r;
}

}  // namespace raw

inline Occupancy thermal_occupancy(TemperatureK t, Frequency f) {
    return Occupancy(raw::thermal_occupancy(t.kelvin, f.hertz));
}

// Linear reporting convention T = n hf / k (not the inverse of thermal_occupancy).
inline TemperatureK occupancy_to_temperature(Occupancy n, Frequency f) {
    return TemperatureK(raw::occupancy_to_kelvin(n.quanta, f.hertz));
}

inline Occupancy occupancy_from_temperature(TemperatureK t, Frequency f) {
    return Occupancy(raw::kelvin_to_occupancy(t.kelvin, f.hertz));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline GainLinear to_linear(GainDb g) { return GainLinear(db_to_linear(g.db)); }
inline GainDb to_db(GainLinear g) { return GainDb(linear_to_db(g.value)); }

inline PowerWatts to_watts(PowerDbm p) { return PowerWatts(1e-3 * db_to_linear(p.dbm)); }
inline PowerDbm to_dbm(PowerWatts p) { return PowerDbm(linear_to_db(p.watts / 1e-3)); }

}  // namespace chainnoise
