#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainnoise/types.hpp"

namespace chainnoise {

// Biased tunnel-junction noise source. The device is current biased in
// practice; bias_voltage_from_current converts with V = R I_b.
struct SntjParams {
    double temperature_k = 0.0;
    double resistance_ohm = 50.0;
    double v_offset_v = 0.0;
    std::vector<double> bias_grid_v;

    void validate() const;
};

// Variable-temperature Johnson-noise source.
struct VtsParams {
    std::vector<double> temperatures_k;

    void validate() const;
};

enum class XKind { Volts, Kelvin };

// Sampled output-noise curve at a single frequency. y carries the raw output
// scale (chain gain times input-referred quanta). rel_noise and seed record
// the generator settings for synthetic curves; they do not enter the CSV form.
struct NoiseCurve {
    double frequency_hz = 0.0;
    XKind x_kind = XKind::Volts;
    std::vector<double> x;
    std::vector<double> y;
    double rel_noise = 0.0;
    std::uint64_t seed = 0;
};

// Occupancy emitted by a biased tunnel junction:
//   (kT/2hf) [ x+ coth x+  +  x- coth x- ],  x± = (eV ± hf) / 2kT,
// continuous at eV = ±hf and in the T -> 0 limit.
double sntj_occupancy_raw(double v_volts, double t_kelvin, double f_hz);
Occupancy sntj_occupancy(double v_volts, TemperatureK t, Frequency f);

// Partial derivatives of the same, used by the fit jacobian.
double sntj_docc_dv(double v_volts, double t_kelvin, double f_hz);
double sntj_docc_dt(double v_volts, double t_kelvin, double f_hz);

// Johnson noise of a matched thermal source; the bias-free junction limit.
double johnson_occupancy_raw(double t_kelvin, double f_hz);
Occupancy johnson_occupancy(TemperatureK t, Frequency f);

double bias_voltage_from_current(double i_amps, double resistance_ohm);

// Forward measurement model with multiplicative Gaussian noise:
//   y = gain (N_in(x) + n_sigma_off) (1 + eps),  eps ~ N(0, rel_noise),
// deterministic for a given seed.
NoiseCurve synthesize_sntj_curve(const SntjParams& src, double chain_gain,
                                 double n_sigma_off_quanta, double f_hz, double rel_noise,
                                 std::uint64_t seed);
NoiseCurve synthesize_vts_curve(const VtsParams& src, double chain_gain,
                                double n_sigma_quanta, double f_hz, double rel_noise,
                                std::uint64_t seed);

// CSV schema: frequency_hz, x_value, x_kind{volts|kelvin}, y_quanta.
std::string noise_curve_to_csv(const NoiseCurve& curve);
NoiseCurve noise_curve_from_csv(std::istream& in);

}  // namespace chainnoise
