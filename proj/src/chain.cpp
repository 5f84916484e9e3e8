#include "chainnoise/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "chainnoise/errors.hpp"
#include "chainnoise/quanta.hpp"

namespace chainnoise {

StageSpec StageSpec::loss(std::string label, FreqProfile eta, double bath_k) {
    StageSpec s;
    s.kind = StageKind::Loss;
    s.label = std::move(label);
    s.eta = std::move(eta);
    s.bath_k = bath_k;
    s.stage_temp_k = bath_k;
    return s;
}

StageSpec StageSpec::paramp(std::string label, FreqProfile gain_db, double excess_k) {
    StageSpec s;
    s.kind = StageKind::ParametricAmp;
    s.label = std::move(label);
    s.gain_db = std::move(gain_db);
    s.excess_k = excess_k;
    return s;
}

StageSpec StageSpec::follower(std::string label, FreqProfile gain_db, FreqProfile added_noise_k) {
    StageSpec s;
    s.kind = StageKind::Follower;
    s.label = std::move(label);
    s.gain_db = std::move(gain_db);
    s.added_noise_k = std::move(added_noise_k);
    return s;
}

void ChainConfig::validate() const {
    if (stages.empty()) throw std::invalid_argument("chain must contain at least one stage");
    if (freq_grid_hz.empty()) throw std::invalid_argument("frequency grid must be non-empty");
    for (std::size_t i = 0; i < freq_grid_hz.size(); ++i) {
        if (!std::isfinite(freq_grid_hz[i]) || freq_grid_hz[i] <= 0.0) {
            throw std::invalid_argument("frequency grid values must be positive");
        }
        if (i > 0 && freq_grid_hz[i] <= freq_grid_hz[i - 1]) {
            throw std::invalid_argument("frequency grid must be strictly increasing");
        }
    }
    int n_paramps = 0;
    for (const auto& st : stages) {
        switch (st.kind) {
            case StageKind::Loss:
                if (st.eta.min_value() <= 0.0 || st.eta.max_value() > 1.0) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': eta must be in (0, 1]");
                }
                if (st.eta_idler &&
                    (st.eta_idler->min_value() <= 0.0 || st.eta_idler->max_value() > 1.0)) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': eta_idler must be in (0, 1]");
                }
                if (st.bath_k < 0.0 || !std::isfinite(st.bath_k)) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': bath temperature must be >= 0 K");
                }
                break;
            case StageKind::ParametricAmp:
                ++n_paramps;
                if (st.gain_db.min_value() < 0.0) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': amplifier gain must be >= 0 dB");
                }
                if (st.excess_k < 0.0 || !std::isfinite(st.excess_k)) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': excess noise must be >= 0 K");
                }
                break;
            case StageKind::Follower:
                if (st.gain_db.min_value() < 0.0) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': amplifier gain must be >= 0 dB");
                }
                if (st.added_noise_k.min_value() < 0.0) {
                    throw std::invalid_argument("stage '" + st.label +
                                                "': added noise must be >= 0 K");
                }
                break;
        }
    }
    if (n_paramps > 1) {
        throw std::invalid_argument("chain must contain at most one parametric amplifier");
    }
    if (idler_mode == IdlerMode::AtIdlerFrequency) {
        if (!pump_freq_hz) {
            throw std::invalid_argument("idler mode 'at-idler-frequency' requires pump_freq_hz");
        }
        if (*pump_freq_hz <= freq_grid_hz.back()) {
            throw std::invalid_argument(
                "pump frequency must exceed every grid frequency (f_idler = f_pump - f_signal)");
        }
    }
    if (band_hz && band_hz->first >= band_hz->second) {
        throw std::invalid_argument("band window must satisfy lo < hi");
    }
}

int ChainConfig::paramp_index() const {
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].kind == StageKind::ParametricAmp) return static_cast<int>(i);
    }
    return -1;
}

Occupancy paramp_output(Occupancy n_sig, Occupancy n_idl, GainLinear g) {
    if (g.value < 1.0) throw std::invalid_argument("amplifier gain must be >= 1");
    return Occupancy(g.value * n_sig.quanta + (g.value - 1.0) * n_idl.quanta);
}

Occupancy loss_stage(Occupancy n_in, Efficiency eta, Occupancy n_bath) {
    return Occupancy(eta.value * n_in.quanta + (1.0 - eta.value) * n_bath.quanta);
}

namespace {

// Per-frequency stage parameters, with the idler-path quantities resolved
// according to the chain's idler mode.
struct Resolved {
    StageKind kind;
    double eta = 1.0;
    double bath_occ = 0.0;
    double eta_idl = 1.0;
    double bath_occ_idl = 0.0;
    double gain = 1.0;
    double excess_s = 0.0;  // signal-to-signal path, quanta
    double excess_i = 0.0;  // idler-to-signal path, quanta
    double added_occ = 0.0; // follower, quanta
};

Resolved resolve(const StageSpec& st, const ChainConfig& cfg, double f_hz) {
    Resolved r;
    r.kind = st.kind;
    switch (st.kind) {
        case StageKind::Loss: {
            r.eta = st.eta(f_hz);
            r.bath_occ = raw::thermal_occupancy(st.bath_k, f_hz);
            switch (cfg.idler_mode) {
                case IdlerMode::SameAsSignal:
                    r.eta_idl = r.eta;
                    r.bath_occ_idl = r.bath_occ;
                    break;
                case IdlerMode::ExplicitProfile:
                    r.eta_idl = st.eta_idler ? (*st.eta_idler)(f_hz) : r.eta;
                    r.bath_occ_idl = r.bath_occ;
                    break;
                case IdlerMode::AtIdlerFrequency: {
                    const double f_i = *cfg.pump_freq_hz - f_hz;
                    r.eta_idl = st.eta(f_i);
                    r.bath_occ_idl = raw::thermal_occupancy(st.bath_k, f_i);
                    break;
                }
            }
            break;
        }
        case StageKind::ParametricAmp: {
            r.gain = db_to_linear(st.gain_db(f_hz));
            const double total = raw::kelvin_to_occupancy(st.excess_k, f_hz);
            r.excess_s = 0.5 * total;
            r.excess_i = 0.5 * total;
            break;
        }
        case StageKind::Follower: {
            r.gain = db_to_linear(st.gain_db(f_hz));
            r.added_occ = raw::kelvin_to_occupancy(st.added_noise_k(f_hz), f_hz);
            break;
        }
    }
    return r;
}

void require_followers_after_amp(const ChainConfig& cfg) {
    const int pidx = cfg.paramp_index();
    if (pidx < 0) return;
    for (int i = 0; i < pidx; ++i) {
        if (cfg.stages[i].kind == StageKind::Follower) {
            throw NumericError("stage '" + cfg.stages[i].label +
                               "': follower amplifiers ahead of the parametric amplifier are "
                               "not supported (idler path undefined)");
        }
    }
}

}  // namespace

ExactPropagation propagate_exact(const ChainConfig& cfg, Occupancy n_in_signal) {
    cfg.validate();
    require_followers_after_amp(cfg);
    const int pidx = cfg.paramp_index();
    if (pidx < 0 && cfg.idler_mode != IdlerMode::SameAsSignal) {
        throw NumericError(
            "idler handling configured but the chain has no parametric amplifier");
    }

    ExactPropagation out;
    out.freq_hz = cfg.freq_grid_hz;
    const std::size_t nf = cfg.freq_grid_hz.size();
    out.output_quanta.resize(nf);
    out.idler_input_quanta.assign(nf, 0.0);
    out.total_transfer.resize(nf);
    out.input_referred_added_quanta.resize(nf);
    out.stage_outputs.resize(nf);

    for (std::size_t k = 0; k < nf; ++k) {
        const double f = cfg.freq_grid_hz[k];
        std::vector<Resolved> rs;
        rs.reserve(cfg.stages.size());
        for (const auto& st : cfg.stages) rs.push_back(resolve(st, cfg, f));

        // Idler entering the amplifier: vacuum propagated through the losses
        // ahead of it, on the idler path.
        double n_idl = constants::vacuum_quanta;
        if (pidx >= 0) {
            for (int i = 0; i < pidx; ++i) {
                if (rs[i].kind == StageKind::Loss) {
                    n_idl = rs[i].eta_idl * n_idl + (1.0 - rs[i].eta_idl) * rs[i].bath_occ_idl;
                }
            }
            out.idler_input_quanta[k] = n_idl;
        }

        double n = n_in_signal.quanta;
        double transfer = 1.0;
        auto& trace = out.stage_outputs[k];
        trace.reserve(cfg.stages.size());
        for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
            const Resolved& r = rs[i];
            switch (r.kind) {
                case StageKind::Loss:
                    n = r.eta * n + (1.0 - r.eta) * r.bath_occ;
                    transfer *= r.eta;
                    break;
                case StageKind::ParametricAmp:
                    n = r.gain * (n + r.excess_s) + (r.gain - 1.0) * (n_idl + r.excess_i);
                    transfer *= r.gain;
                    break;
                case StageKind::Follower:
                    n = r.gain * (n + r.added_occ);
                    transfer *= r.gain;
                    break;
            }
            trace.push_back({cfg.stages[i].label, n});
        }
        out.output_quanta[k] = n;
        out.total_transfer[k] = transfer;
        out.input_referred_added_quanta[k] = n / transfer - n_in_signal.quanta;
    }
    return out;
}

ChainNoiseReport chain_added_noise(const ChainConfig& cfg) {
    cfg.validate();
    const int pidx = cfg.paramp_index();
    if (pidx < 0) {
        throw NumericError("chain-added noise requires a parametric amplifier stage; "
                           "use the off-state computation for follower-only chains");
    }
    require_followers_after_amp(cfg);

    ChainNoiseReport rep;
    rep.freq_hz = cfg.freq_grid_hz;
    const std::size_t nf = cfg.freq_grid_hz.size();
    const std::size_t ns = cfg.stages.size();
    rep.n_sigma_quanta.resize(nf);
    rep.t_sigma_k.resize(nf);
    rep.chain_gain_linear.resize(nf);
    rep.stages.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        rep.stages[i].label = cfg.stages[i].label;
        rep.stages[i].kind = cfg.stages[i].kind;
        rep.stages[i].intrinsic_quanta.resize(nf);
        rep.stages[i].input_referred_quanta.resize(nf);
    }

    // First loss stage ahead of the amp carries the idler vacuum term; with
    // no such stage it goes to the amplifier row.
    int idler_vacuum_row = pidx;
    for (int i = 0; i < pidx; ++i) {
        if (cfg.stages[i].kind == StageKind::Loss) {
            idler_vacuum_row = i;
            break;
        }
    }

    for (std::size_t k = 0; k < nf; ++k) {
        const double f = cfg.freq_grid_hz[k];
        std::vector<Resolved> rs;
        rs.reserve(ns);
        for (const auto& st : cfg.stages) rs.push_back(resolve(st, cfg, f));

        if (rs[pidx].gain < 10.0) rep.low_gain_flag = true;

        // Signal transfer up to (not including) each stage, and the full product.
        std::vector<double> before(ns, 1.0);
        double d = 1.0;
        for (std::size_t i = 0; i < ns; ++i) {
            before[i] = d;
            d *= (rs[i].kind == StageKind::Loss) ? rs[i].eta : rs[i].gain;
        }
        rep.chain_gain_linear[k] = d;

        const double pre_signal = before[pidx];  // product of eta ahead of the amp

        // Idler-path suffix transfers: product of eta_idl over loss stages
        // strictly after stage i and ahead of the amp.
        std::vector<double> idl_suffix(pidx + 1, 1.0);
        for (int i = pidx - 1; i >= 0; --i) {
            idl_suffix[i] = idl_suffix[i + 1] *
                            ((rs[i].kind == StageKind::Loss) ? rs[i].eta_idl : 1.0);
        }

        double n_sigma = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            const Resolved& r = rs[i];
            double ir = 0.0;
            switch (r.kind) {
                case StageKind::Loss:
                    // Signal-path loss noise, referred through everything ahead
                    // of the stage and through the stage itself.
                    ir = (1.0 - r.eta) * r.bath_occ / (before[i] * r.eta);
                    if (static_cast<int>(i) < pidx) {
                        // Idler mirror: this stage injects bath noise into the
                        // idler mode, which the amp folds back with weight ~g.
                        ir += (1.0 - r.eta_idl) * r.bath_occ_idl * idl_suffix[i + 1] / pre_signal;
                    }
                    break;
                case StageKind::ParametricAmp:
                    ir = (r.excess_s + r.excess_i) / pre_signal;
                    break;
                case StageKind::Follower:
                    ir = r.added_occ / before[i];
                    break;
            }
            if (static_cast<int>(i) == idler_vacuum_row) {
                ir += constants::vacuum_quanta * idl_suffix[0] / pre_signal;
            }
            rep.stages[i].input_referred_quanta[k] = ir;
            rep.stages[i].intrinsic_quanta[k] = ir * before[i];
            n_sigma += ir;
        }
        rep.n_sigma_quanta[k] = n_sigma;
        rep.t_sigma_k[k] = raw::occupancy_to_kelvin(n_sigma, f);
    }
    return rep;
}

ChainNoiseReport chain_added_noise_off_report(const ChainConfig& cfg) {
    cfg.validate();
    ChainNoiseReport rep;
    rep.freq_hz = cfg.freq_grid_hz;
    const std::size_t nf = cfg.freq_grid_hz.size();
    const std::size_t ns = cfg.stages.size();
    rep.n_sigma_quanta.resize(nf);
    rep.t_sigma_k.resize(nf);
    rep.chain_gain_linear.resize(nf);
    rep.stages.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        rep.stages[i].label = cfg.stages[i].label;
        rep.stages[i].kind = cfg.stages[i].kind;
        rep.stages[i].intrinsic_quanta.assign(nf, 0.0);
        rep.stages[i].input_referred_quanta.assign(nf, 0.0);
    }
    for (std::size_t k = 0; k < nf; ++k) {
        const double f = cfg.freq_grid_hz[k];
        double n_sigma = 0.0;
        double d = 1.0;  // transfer before the current stage; amp counts as 1
        for (std::size_t i = 0; i < ns; ++i) {
            const Resolved r = resolve(cfg.stages[i], cfg, f);
            double ir = 0.0;
            switch (r.kind) {
                case StageKind::Loss:
                    ir = (1.0 - r.eta) * r.bath_occ / (d * r.eta);
                    break;
                case StageKind::ParametricAmp:
                    break;  // passive element of gain 1, idler not tracked
                case StageKind::Follower:
                    ir = r.added_occ / d;
                    break;
            }
            rep.stages[i].input_referred_quanta[k] = ir;
            rep.stages[i].intrinsic_quanta[k] = ir * d;
            n_sigma += ir;
            if (r.kind == StageKind::Loss) d *= r.eta;
            if (r.kind == StageKind::Follower) d *= r.gain;
        }
        rep.n_sigma_quanta[k] = n_sigma;
        rep.t_sigma_k[k] = raw::occupancy_to_kelvin(n_sigma, f);
        rep.chain_gain_linear[k] = d;
    }
    return rep;
}

std::vector<double> chain_added_noise_off(const ChainConfig& cfg) {
    return chain_added_noise_off_report(cfg).n_sigma_quanta;
}

std::vector<double> off_state_transfer(const ChainConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.freq_grid_hz.size());
    for (std::size_t k = 0; k < cfg.freq_grid_hz.size(); ++k) {
        double d = 1.0;
        for (const auto& st : cfg.stages) {
            const Resolved r = resolve(st, cfg, cfg.freq_grid_hz[k]);
            if (r.kind == StageKind::Loss) d *= r.eta;
            if (r.kind == StageKind::Follower) d *= r.gain;
        }
        out[k] = d;
    }
    return out;
}

double noise_rise(Occupancy n_sigma, Occupancy n_sigma_off, GainLinear g) {
    if (g.value < 1.0) throw std::invalid_argument("noise rise requires gain >= 1");
    return g.value * (n_sigma.quanta + constants::vacuum_quanta) /
           (n_sigma_off.quanta + constants::vacuum_quanta);
}

Occupancy noise_from_rise(double r, GainLinear g, Occupancy n_sigma_off) {
    if (!(r > 0.0)) throw NumericError("noise rise ratio must be > 0");
    if (g.value < 1.0) throw std::invalid_argument("noise rise requires gain >= 1");
    const double n = r * (n_sigma_off.quanta + constants::vacuum_quanta) / g.value -
                     constants::vacuum_quanta;
    if (n < 0.0) {
        throw NumericError("noise rise inversion produced a negative occupancy "
                           "(inconsistent r, gain, or off-state noise)");
    }
    return Occupancy(n);
}

namespace {

double band_mean(const std::vector<double>& freq, const std::vector<double>& v,
                 double lo, double hi) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < freq.size(); ++k) {
        if (freq[k] >= lo && freq[k] <= hi) {
            sum += v[k];
            ++n;
        }
    }
    if (n == 0) throw NumericError("band window contains no grid frequencies");
    return sum / static_cast<double>(n);
}

std::pair<double, double> sweep_window(const ChainConfig& cfg) {
    if (cfg.band_hz) return *cfg.band_hz;
    return {cfg.freq_grid_hz.front(), cfg.freq_grid_hz.back()};
}

}  // namespace

std::vector<std::pair<double, double>> gain_sweep(const ChainConfig& cfg,
                                                  const std::vector<double>& gains_linear) {
    const auto [lo, hi] = sweep_window(cfg);
    const int pidx = cfg.paramp_index();
    if (pidx < 0) throw NumericError("gain sweep requires a parametric amplifier stage");
    std::vector<std::pair<double, double>> out;
    out.reserve(gains_linear.size());
    double prev = 0.0;
    bool first = true;
    for (double g : gains_linear) {
        if (!(g >= 1.0)) throw std::invalid_argument("sweep gains must be >= 1 (0 dB)");
        if (!first && g <= prev) throw std::invalid_argument("sweep gains must be increasing");
        prev = g;
        first = false;
        ChainConfig c = cfg;
        c.stages[pidx].gain_db = FreqProfile::constant(linear_to_db(g));
        const ChainNoiseReport rep = chain_added_noise(c);
        out.emplace_back(g, band_mean(rep.freq_hz, rep.t_sigma_k, lo, hi));
    }
    return out;
}

std::vector<std::pair<double, double>> gain_sweep_at(const ChainConfig& cfg,
                                                     const std::vector<double>& gains_linear,
                                                     double f_hz) {
    ChainConfig c = cfg;
    c.freq_grid_hz = {f_hz};
    c.band_hz.reset();
    return gain_sweep(c, gains_linear);
}

BandAverageTable band_average(const ChainNoiseReport& report, const ChainConfig& cfg,
                              double lo_hz, double hi_hz) {
    BandAverageTable t;
    t.lo_hz = lo_hz;
    t.hi_hz = hi_hz;
    t.low_gain_flag = report.low_gain_flag;
    t.n_sigma_quanta = band_mean(report.freq_hz, report.n_sigma_quanta, lo_hz, hi_hz);
    t.t_sigma_k = band_mean(report.freq_hz, report.t_sigma_k, lo_hz, hi_hz);
    t.chain_gain_db = linear_to_db(band_mean(report.freq_hz, report.chain_gain_linear,
                                             lo_hz, hi_hz));
    for (std::size_t i = 0; i < report.stages.size(); ++i) {
        const auto& row = report.stages[i];
        BandRow br;
        br.label = row.label;
        br.kind = row.kind;
        if (row.kind == StageKind::Loss) {
            std::vector<double> etas(report.freq_hz.size());
            for (std::size_t k = 0; k < etas.size(); ++k) {
                etas[k] = cfg.stages[i].eta(report.freq_hz[k]);
            }
            br.transmission_efficiency = band_mean(report.freq_hz, etas, lo_hz, hi_hz);
            br.insertion_loss_db = -linear_to_db(*br.transmission_efficiency);
        }
        std::vector<double> intr_k(report.freq_hz.size()), ir_k(report.freq_hz.size());
        for (std::size_t k = 0; k < report.freq_hz.size(); ++k) {
            intr_k[k] = raw::occupancy_to_kelvin(row.intrinsic_quanta[k], report.freq_hz[k]);
            ir_k[k] = raw::occupancy_to_kelvin(row.input_referred_quanta[k], report.freq_hz[k]);
        }
        br.intrinsic_k = band_mean(report.freq_hz, intr_k, lo_hz, hi_hz);
        br.input_referred_k = band_mean(report.freq_hz, ir_k, lo_hz, hi_hz);
        t.rows.push_back(std::move(br));
    }
    return t;
}

}  // namespace chainnoise
