#include "chainnoise/sources.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "chainnoise/csv.hpp"
#include "chainnoise/errors.hpp"
#include "chainnoise/quanta.hpp"
#include "chainnoise/rng.hpp"

namespace chainnoise {

void SntjParams::validate() const {
    if (!(resistance_ohm > 0.0) || !std::isfinite(resistance_ohm)) {
        throw std::invalid_argument("junction resistance must be > 0 Ohm");
    }
    if (temperature_k < 0.0 || !std::isfinite(temperature_k)) {
        throw std::invalid_argument("junction temperature must be >= 0 K");
    }
    if (!std::isfinite(v_offset_v)) throw std::invalid_argument("voltage offset must be finite");
    if (bias_grid_v.size() < 2) throw std::invalid_argument("bias grid needs >= 2 points");
    for (std::size_t i = 0; i < bias_grid_v.size(); ++i) {
        if (!std::isfinite(bias_grid_v[i])) {
            throw std::invalid_argument("bias grid values must be finite");
        }
        if (i > 0 && bias_grid_v[i] <= bias_grid_v[i - 1]) {
            throw std::invalid_argument("bias grid must be strictly increasing");
        }
    }
}

void VtsParams::validate() const {
    if (temperatures_k.size() < 2) {
        throw std::invalid_argument("temperature list needs >= 2 points");
    }
    for (std::size_t i = 0; i < temperatures_k.size(); ++i) {
        if (!(temperatures_k[i] >= 0.0) || !std::isfinite(temperatures_k[i])) {
            throw std::invalid_argument("stage temperatures must be >= 0 K");
        }
        if (i > 0 && temperatures_k[i] <= temperatures_k[i - 1]) {
            throw std::invalid_argument("stage temperatures must be strictly increasing");
        }
    }
}

double sntj_occupancy_raw(double v_volts, double t_kelvin, double f_hz) {
    if (!std::isfinite(v_volts) || !std::isfinite(t_kelvin) || !std::isfinite(f_hz)) {
        throw std::invalid_argument("tunnel-junction model inputs must be finite");
    }
    const double hf = constants::planck_h * f_hz;
    const double ev = constants::electron_charge * v_volts;
    if (t_kelvin == 0.0) {
        // x coth x -> |x|; the bracket collapses to |eV+hf| + |eV-hf| over 2.
        return (std::fabs(ev + hf) + std::fabs(ev - hf)) / (4.0 * hf);
    }
    const double kt2 = 2.0 * constants::boltzmann_k * t_kelvin;
    const double xp = (ev + hf) / kt2;
    const double xm = (ev - hf) / kt2;
    return (kt2 / (4.0 * hf)) * (raw::xcoth(xp) + raw::xcoth(xm));
}

Occupancy sntj_occupancy(double v_volts, TemperatureK t, Frequency f) {
    return Occupancy(sntj_occupancy_raw(v_volts, t.kelvin, f.hertz));
}

double sntj_docc_dv(double v_volts, double t_kelvin, double f_hz) {
    const double hf = constants::planck_h * f_hz;
    const double ev = constants::electron_charge * v_volts;
    if (t_kelvin == 0.0) {
        const double sp = (ev + hf) >= 0.0 ? 1.0 : -1.0;
        const double sm = (ev - hf) >= 0.0 ? 1.0 : -1.0;
        return constants::electron_charge * (sp + sm) / (4.0 * hf);
    }
    const double kt2 = 2.0 * constants::boltzmann_k * t_kelvin;
    const double xp = (ev + hf) / kt2;
    const double xm = (ev - hf) / kt2;
    return constants::electron_charge / (4.0 * hf) *
           (raw::xcoth_deriv(xp) + raw::xcoth_deriv(xm));
}

double sntj_docc_dt(double v_volts, double t_kelvin, double f_hz) {
    const double hf = constants::planck_h * f_hz;
    if (t_kelvin == 0.0) return 0.0;
    const double ev = constants::electron_charge * v_volts;
    const double kt2 = 2.0 * constants::boltzmann_k * t_kelvin;
    const double xp = (ev + hf) / kt2;
    const double xm = (ev - hf) / kt2;
    // d/dT [(kT/2hf)(g(x+) + g(x-))] with x ~ 1/T reduces to the (x/sinh x)^2 kernel.
    return constants::boltzmann_k / (2.0 * hf) *
           (raw::inv_sinh_sq_x2(xp) + raw::inv_sinh_sq_x2(xm));
}

double johnson_occupancy_raw(double t_kelvin, double f_hz) {
    return raw::thermal_occupancy(t_kelvin, f_hz);
}

Occupancy johnson_occupancy(TemperatureK t, Frequency f) {
    return thermal_occupancy(t, f);
}

double bias_voltage_from_current(double i_amps, double resistance_ohm) {
    return i_amps * resistance_ohm;
}

namespace {

NoiseCurve synthesize(XKind kind, const std::vector<double>& xs, double f_hz,
                      double chain_gain, double rel_noise, std::uint64_t seed,
                      const std::vector<double>& n_in) {
    if (rel_noise < 0.0 || !std::isfinite(rel_noise)) {
        throw std::invalid_argument("relative noise must be >= 0");
    }
    if (!(chain_gain > 0.0)) throw std::invalid_argument("chain gain must be > 0");
    NoiseCurve c;
    c.frequency_hz = f_hz;
    c.x_kind = kind;
    c.x = xs;
    c.y.resize(xs.size());
    c.rel_noise = rel_noise;
    c.seed = seed;
    rng::Gaussian gauss(seed);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double eps = (rel_noise > 0.0) ? rel_noise * gauss.next() : 0.0;
        c.y[i] = chain_gain * n_in[i] * (1.0 + eps);
    }
    return c;
}

}  // namespace

NoiseCurve synthesize_sntj_curve(const SntjParams& src, double chain_gain,
                                 double n_sigma_off_quanta, double f_hz, double rel_noise,
                                 std::uint64_t seed) {
    src.validate();
    Frequency f(f_hz);
    std::vector<double> n_in(src.bias_grid_v.size());
    for (std::size_t i = 0; i < n_in.size(); ++i) {
        n_in[i] = sntj_occupancy_raw(src.bias_grid_v[i] - src.v_offset_v, src.temperature_k,
                                     f_hz) +
                  n_sigma_off_quanta;
    }
    return synthesize(XKind::Volts, src.bias_grid_v, f_hz, chain_gain, rel_noise, seed, n_in);
}

NoiseCurve synthesize_vts_curve(const VtsParams& src, double chain_gain,
                                double n_sigma_quanta, double f_hz, double rel_noise,
                                std::uint64_t seed) {
    src.validate();
    Frequency f(f_hz);
    std::vector<double> n_in(src.temperatures_k.size());
    for (std::size_t i = 0; i < n_in.size(); ++i) {
        n_in[i] = johnson_occupancy_raw(src.temperatures_k[i], f_hz) + n_sigma_quanta;
    }
    return synthesize(XKind::Kelvin, src.temperatures_k, f_hz, chain_gain, rel_noise, seed,
                      n_in);
}

std::string noise_curve_to_csv(const NoiseCurve& curve) {
    std::ostringstream out;
    out << "frequency_hz,x_value,x_kind,y_quanta\n";
    const char* kind = (curve.x_kind == XKind::Volts) ? "volts" : "kelvin";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << csv::num(curve.frequency_hz) << ',' << csv::num(curve.x[i]) << ',' << kind
            << ',' << csv::num(curve.y[i]) << '\n';
    }
    return out.str();
}

NoiseCurve noise_curve_from_csv(std::istream& in) {
    const csv::Table t = csv::read(in);
    csv::require_columns(t, {"frequency_hz", "x_value", "x_kind", "y_quanta"});
    if (t.rows.empty()) throw ConfigError("noise curve CSV contains no data rows");
    const auto freq = csv::column_as_double(t, "frequency_hz");
    const auto x = csv::column_as_double(t, "x_value");
    const auto y = csv::column_as_double(t, "y_quanta");
    const std::size_t kind_col = t.column_index("x_kind");

    NoiseCurve c;
    c.frequency_hz = freq.front();
    const std::string& kind = t.rows.front()[kind_col];
    if (kind == "volts") {
        c.x_kind = XKind::Volts;
    } else if (kind == "kelvin") {
        c.x_kind = XKind::Kelvin;
    } else {
        throw ConfigError("noise curve CSV: x_kind must be 'volts' or 'kelvin', got '" +
                          kind + "'");
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (freq[i] != c.frequency_hz) {
            throw ConfigError("noise curve CSV must contain a single frequency");
        }
        if (t.rows[i][kind_col] != kind) {
            throw ConfigError("noise curve CSV must use a single x_kind");
        }
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || y[i] <= 0.0) {
            throw ConfigError("noise curve CSV: y values must be finite and positive");
        }
        if (i > 0 && x[i] <= x[i - 1]) {
            throw ConfigError("noise curve CSV: x values must be strictly increasing");
        }
    }
    c.x = x;
    c.y = y;
    return c;
}

}  // namespace chainnoise
