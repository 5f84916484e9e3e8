#include "chainnoise/budget.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "chainnoise/errors.hpp"
#include "chainnoise/quanta.hpp"
#include "chainnoise/rng.hpp"

namespace chainnoise {

PackagingEfficiency infer_packaging_efficiency(double gain_sntj, double gain_vts) {
    if (!(gain_sntj > 0.0) || !(gain_vts > 0.0)) {
        throw NumericError("packaging efficiency needs two positive gains");
    }
    PackagingEfficiency out;
    out.eta = gain_sntj / gain_vts;
    out.flagged_above_unity = out.eta > 1.0;
    return out;
}

double split_transmission_equal_db(double eta_total, int n_ways) {
    Efficiency check(eta_total);
    if (n_ways < 1) throw std::invalid_argument("transmission split needs n_ways >= 1");
    return std::pow(eta_total, 1.0 / n_ways);
}

double infer_follower_noise_quanta(double n_sigma_off_quanta, double eta_1c, double eta_1h,
                                   double eta_2, double n_bath_quanta,
                                   double n_cold_quanta) {
    Efficiency e1c(eta_1c), e1h(eta_1h), e2(eta_2);
    const double n_h = eta_2 * eta_1h * eta_1c * n_sigma_off_quanta -
                       eta_2 * eta_1h * (1.0 - eta_1c) * n_cold_quanta -
                       eta_2 * (1.0 - eta_1h) * n_bath_quanta -
                       (1.0 - eta_2) * n_bath_quanta;
    return n_h;
}

namespace {

int sole_follower_index(const ChainConfig& chain) {
    int idx = -1;
    for (std::size_t i = 0; i < chain.stages.size(); ++i) {
        if (chain.stages[i].kind == StageKind::Follower) {
            if (idx >= 0) {
                throw NumericError("follower-noise inference needs exactly one follower stage");
            }
            idx = static_cast<int>(i);
        }
    }
    if (idx < 0) throw NumericError("follower-noise inference needs a follower stage");
    return idx;
}

void check_non_negative(std::vector<double>& values, const std::vector<double>& scale,
                        const char* what) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double tol = 1e-9 * std::max(1.0, std::fabs(scale[k]));
        if (values[k] < -tol) {
            throw NumericError(std::string(what) +
                               " came out negative; the calibration inputs are inconsistent "
                               "with the configured chain");
        }
    }
}

}  // namespace

std::vector<double> infer_follower_noise_k(const ChainConfig& chain,
                                           const std::vector<double>& n_sigma_off_quanta) {
    chain.validate();
    if (n_sigma_off_quanta.size() != chain.freq_grid_hz.size()) {
        throw ConfigError("off-state noise data length does not match the frequency grid");
    }
    const int fidx = sole_follower_index(chain);

    // Remove the follower's own contribution from the model, then attribute
    // the measured excess at the follower's input plane.
    ChainConfig bare = chain;
    bare.stages[fidx].added_noise_k = FreqProfile::constant(0.0);
    const std::vector<double> n_base = chain_added_noise_off(bare);

    // Off-state transfer from the chain input to the follower input.
    std::vector<double> out(chain.freq_grid_hz.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double f = chain.freq_grid_hz[k];
        double d = 1.0;
        for (int i = 0; i < fidx; ++i) {
            const auto& st = chain.stages[i];
            if (st.kind == StageKind::Loss) d *= st.eta(f);
            if (st.kind == StageKind::Follower) d *= db_to_linear(st.gain_db(f));
        }
        const double n_h = (n_sigma_off_quanta[k] - n_base[k]) * d;
        out[k] = raw::occupancy_to_kelvin(n_h, f);
    }
    check_non_negative(out, out, "inferred follower added noise");
    return out;
}

std::vector<double> infer_excess_noise_k(const ChainConfig& chain,
                                         const std::vector<double>& t_sigma_k) {
    chain.validate();
    if (t_sigma_k.size() != chain.freq_grid_hz.size()) {
        throw ConfigError("chain-noise data length does not match the frequency grid");
    }
    const int pidx = chain.paramp_index();
    if (pidx < 0) throw NumericError("excess-noise inference requires an amplifier stage");

    ChainConfig bare = chain;
    bare.stages[pidx].excess_k = 0.0;
    const ChainNoiseReport base = chain_added_noise(bare);

    std::vector<double> out(chain.freq_grid_hz.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double f = chain.freq_grid_hz[k];
        double pre = 1.0;  // signal transfer ahead of the amplifier
        for (int i = 0; i < pidx; ++i) {
            if (chain.stages[i].kind == StageKind::Loss) pre *= chain.stages[i].eta(f);
        }
        const double n_meas = raw::kelvin_to_occupancy(t_sigma_k[k], f);
        const double n_ex = (n_meas - base.n_sigma_quanta[k]) * pre;
        out[k] = raw::occupancy_to_kelvin(n_ex, f);
    }
    check_non_negative(out, t_sigma_k, "inferred amplifier excess noise");
    return out;
}

std::vector<double> predict_chain_noise_k(const ChainConfig& chain) {
    chain.validate();
    if (chain.paramp_index() >= 0) {
        return chain_added_noise(chain).t_sigma_k;
    }
    const std::vector<double> n = chain_added_noise_off(chain);
    std::vector<double> out(n.size());
    for (std::size_t k = 0; k < n.size(); ++k) {
        out[k] = raw::occupancy_to_kelvin(n[k], chain.freq_grid_hz[k]);
    }
    return out;
}

namespace {

struct ParsedTarget {
    bool output_power = false;
    int stage_index = -1;
    std::string param;
};

ParsedTarget parse_target(const ChainConfig& chain, const std::string& target) {
    ParsedTarget t;
    if (target == "output_power_db") {
        t.output_power = true;
        return t;
    }
    if (target.rfind("stage:", 0) != 0) {
        throw ConfigError("unknown Monte Carlo prior target '" + target + "'");
    }
    const std::size_t second = target.find(':', 6);
    if (second == std::string::npos) {
        throw ConfigError("Monte Carlo prior target '" + target +
                          "' must look like stage:<label>:<param>");
    }
    const std::string label = target.substr(6, second - 6);
    t.param = target.substr(second + 1);
    for (std::size_t i = 0; i < chain.stages.size(); ++i) {
        if (chain.stages[i].label == label) {
            t.stage_index = static_cast<int>(i);
            break;
        }
    }
    if (t.stage_index < 0) {
        throw ConfigError("Monte Carlo prior target names unknown stage '" + label + "'");
    }
    static const char* allowed[] = {"eta", "gain_db", "bath_k", "added_noise_k", "excess_k"};
    if (std::find(std::begin(allowed), std::end(allowed), t.param) == std::end(allowed)) {
        throw ConfigError("Monte Carlo prior target '" + target +
                          "' has unknown parameter '" + t.param + "'");
    }
    return t;
}

// Draw an additive perturbation, redrawing until the predicate accepts it.
double draw_truncated(rng::Gaussian& g, double sigma, const auto& accept) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double d = sigma * g.next();
        if (accept(d)) return d;
    }
    throw NumericError("Monte Carlo prior truncation failed to find an admissible draw");
}

// Welford running moments: exact zeros for identical samples.
struct Accumulator {
    std::vector<double> mean, m2;
    long count = 0;
    void init(std::size_t n) {
        mean.assign(n, 0.0);
        m2.assign(n, 0.0);
        count = 0;
    }
    void add(const std::vector<double>& v) {
        ++count;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double delta = v[i] - mean[i];
            mean[i] += delta / static_cast<double>(count);
            m2[i] += delta * (v[i] - mean[i]);
        }
    }
    McStats stats(int n) const {
        McStats s;
        s.mean = mean;
        s.stddev.resize(mean.size());
        for (std::size_t i = 0; i < mean.size(); ++i) {
            s.stddev[i] = std::sqrt(std::max(0.0, m2[i] / n));
        }
        return s;
    }
};

// Output-power calibration error: what a measurement off by `scale` would
// report as input-referred noise.
double recalibrated(double n_quanta, double scale) {
    return (n_quanta + constants::vacuum_quanta) * scale - constants::vacuum_quanta;
}

}  // namespace

McResult mc_uncertainty(const ChainConfig& chain, const McRequest& request) {
    chain.validate();
    if (request.n_samples < 100) {
        throw std::invalid_argument("Monte Carlo needs >= 100 samples");
    }
    std::vector<ParsedTarget> targets;
    targets.reserve(request.priors.size());
    for (const auto& p : request.priors) {
        if (p.sigma < 0.0 || !std::isfinite(p.sigma)) {
            throw ConfigError("Monte Carlo prior sigma must be >= 0");
        }
        targets.push_back(parse_target(chain, p.target));
    }
    const bool has_amp = chain.paramp_index() >= 0;
    const std::size_t nf = chain.freq_grid_hz.size();

    McResult out;
    out.freq_hz = chain.freq_grid_hz;
    Accumulator acc_on, acc_off, acc_th, acc_tex;
    acc_on.init(nf);
    acc_off.init(nf);
    const bool want_th = request.measured_n_sigma_off_quanta.has_value();
    const bool want_tex = request.measured_t_sigma_k.has_value() && has_amp;
    if (want_th) acc_th.init(nf);
    if (want_tex) acc_tex.init(nf);

    for (int s = 0; s < request.n_samples; ++s) {
        rng::Gaussian g(rng::derive_seed(request.seed, static_cast<std::uint64_t>(s)));
        ChainConfig sample = chain;
        double power_scale = 1.0;
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            const ParsedTarget& t = targets[ti];
            const double sigma = request.priors[ti].sigma;
            if (t.output_power) {
                power_scale = db_to_linear(sigma * g.next());
                continue;
            }
            StageSpec& st = sample.stages[static_cast<std::size_t>(t.stage_index)];
            if (t.param == "eta") {
                const double d = draw_truncated(g, sigma, [&](double dd) {
                    return st.eta.min_value() + dd > 0.0 && st.eta.max_value() + dd <= 1.0;
                });
                st.eta = st.eta.shifted(d);
            } else if (t.param == "gain_db") {
                const double d = draw_truncated(g, sigma, [&](double dd) {
                    return st.gain_db.min_value() + dd >= 0.0;
                });
                st.gain_db = st.gain_db.shifted(d);
            } else if (t.param == "bath_k") {
                st.bath_k += draw_truncated(g, sigma,
                                            [&](double dd) { return st.bath_k + dd >= 0.0; });
            } else if (t.param == "added_noise_k") {
                const double d = draw_truncated(g, sigma, [&](double dd) {
                    return st.added_noise_k.min_value() + dd >= 0.0;
                });
                st.added_noise_k = st.added_noise_k.shifted(d);
            } else if (t.param == "excess_k") {
                st.excess_k += draw_truncated(
                    g, sigma, [&](double dd) { return st.excess_k + dd >= 0.0; });
            }
        }

        const std::vector<double> n_off = chain_added_noise_off(sample);
        std::vector<double> t_off(nf), t_on(nf);
        std::vector<double> n_on;
        if (has_amp) n_on = chain_added_noise(sample).n_sigma_quanta;
        for (std::size_t k = 0; k < nf; ++k) {
            const double f = chain.freq_grid_hz[k];
            t_off[k] = raw::occupancy_to_kelvin(recalibrated(n_off[k], power_scale), f);
            const double n = has_amp ? n_on[k] : n_off[k];
            t_on[k] = raw::occupancy_to_kelvin(recalibrated(n, power_scale), f);
        }
        acc_on.add(t_on);
        acc_off.add(t_off);

        if (want_th) {
            std::vector<double> meas(nf);
            for (std::size_t k = 0; k < nf; ++k) {
                meas[k] = recalibrated((*request.measured_n_sigma_off_quanta)[k], power_scale);
            }
            acc_th.add(infer_follower_noise_k(sample, meas));
        }
        if (want_tex) {
            std::vector<double> meas(nf);
            for (std::size_t k = 0; k < nf; ++k) {
                const double f = chain.freq_grid_hz[k];
                const double n = raw::kelvin_to_occupancy((*request.measured_t_sigma_k)[k], f);
                meas[k] = raw::occupancy_to_kelvin(recalibrated(n, power_scale), f);
            }
            acc_tex.add(infer_excess_noise_k(sample, meas));
        }
    }

    out.t_sigma_k = acc_on.stats(request.n_samples);
    out.t_sigma_off_k = acc_off.stats(request.n_samples);
    if (want_th) out.t_h_k = acc_th.stats(request.n_samples);
    if (want_tex) out.t_ex_k = acc_tex.stats(request.n_samples);
    return out;
}

DcPower dc_power(double v_volts, double i_amps) {
    if (!std::isfinite(v_volts) || !std::isfinite(i_amps)) {
        throw std::invalid_argument("dc power inputs must be finite");
    }
    if (i_amps == 0.0) {
        throw NumericError("resistance is undefined at zero bias current");
    }
    return {v_volts * i_amps, v_volts / i_amps};
}

PumpBudget pump_dissipation(PowerDbm delivered, const std::vector<PumpPathElement>& path) {
    for (const auto& e : path) {
        if (e.db < 0.0 || !std::isfinite(e.db)) {
            throw std::invalid_argument("path element '" + e.label +
                                        "': attenuation/coupling must be >= 0 dB");
        }
    }
    PumpBudget out;
    out.delivered_w = to_watts(delivered).watts;

    // Walk device -> source, growing the power by each element's dB.
    double p = out.delivered_w;
    std::vector<PowerEntry> reversed;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        const double p_in = p * db_to_linear(it->db);
        const double diss = p_in - p;
        const double stage = (it->kind == PumpPathElement::Kind::Coupler)
                                 ? it->termination_temp_k
                                 : it->stage_temp_k;
        reversed.push_back({it->label, stage, diss});
        p = p_in;
    }
    out.input_w = p;
    out.entries.assign(reversed.rbegin(), reversed.rend());

    std::map<double, double> totals;
    for (const auto& e : out.entries) totals[e.stage_temp_k] += e.dissipated_w;
    out.totals_by_stage.assign(totals.begin(), totals.end());
    return out;
}

}  // namespace chainnoise
