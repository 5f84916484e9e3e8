#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace chainnoise {

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}
}  // namespace detail

// Thin unit-tagged scalars. Construction validates the domain invariant;
// arithmetic happens on the raw member, conversions live in quanta.hpp.

struct Frequency {
    explicit Frequency(double hz) : hertz(hz) {
        detail::require_finite(hz, "frequency");
        if (hz <= 0.0) throw std::invalid_argument("frequency must be > 0 Hz");
    }
    double hertz;
};

struct TemperatureK {
    explicit TemperatureK(double k) : kelvin(k) {
        detail::require_finite(k, "temperature");
        if (k < 0.0) throw std::invalid_argument("temperature must be >= 0 K");
    }
    double kelvin;
};

// Noise power spectral density in photon-number units; vacuum = 1/2.
struct Occupancy {
    Occupancy() : quanta(0.0) {}
    explicit Occupancy(double q) : quanta(q) {
        detail::require_finite(q, "occupancy");
        if (q < 0.0) throw std::invalid_argument("occupancy must be >= 0 quanta");
    }
    double quanta;
};

struct GainDb {
    explicit GainDb(double v) : db(v) { detail::require_finite(v, "gain (dB)"); }
    double db;
};

struct GainLinear {
    explicit GainLinear(double v) : value(v) {
        detail::require_finite(v, "linear gain");
        if (v < 0.0) throw std::invalid_argument("linear gain must be >= 0");
    }
    double value;
};

struct PowerDbm {
    explicit PowerDbm(double v) : dbm(v) { detail::require_finite(v, "power (dBm)"); }
    double dbm;
};

struct PowerWatts {
    explicit PowerWatts(double v) : watts(v) {
        detail::require_finite(v, "power (W)");
        if (v < 0.0) throw std::invalid_argument("power must be >= 0 W");
    }
    double watts;
};

// Transmission efficiency of a passive stage, in (0, 1].
struct Efficiency {
    explicit Efficiency(double v) : value(v) {
        detail::require_finite(v, "efficiency");
        if (v <= 0.0 || v > 1.0) throw std::invalid_argument("efficiency must be in (0, 1]");
    }
    double value;
};

}  // namespace chainnoise
