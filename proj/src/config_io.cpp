#include "chainnoise/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "chainnoise/csv.hpp"
#include "chainnoise/errors.hpp"
#include "chainnoise/quanta.hpp"

namespace chainnoise::io {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::string& ctx,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
        }
    }
}

const json& require_key(const json& obj, const std::string& ctx, const std::string& key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(ctx + ": missing required key '" + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) throw ConfigError(ctx + ": expected a number");
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) throw ConfigError(ctx + ": expected a string");
    return v.get<std::string>();
}

std::uint64_t as_seed(const json& v, const std::string& ctx) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ConfigError(ctx + ": expected an integer seed");
    }
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ConfigError(ctx + ": seed must be >= 0");
    return static_cast<std::uint64_t>(s);
}

int as_points(const json& v, const std::string& ctx) {
    if (!v.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
    const auto n = v.get<std::int64_t>();
    if (n < 1 || n > 10'000'000) throw ConfigError(ctx + ": point count out of range");
    return static_cast<int>(n);
}

// A stage parameter: a plain number or [[freq_hz, value], ...] pairs.
FreqProfile as_profile(const json& v, const std::string& ctx) {
    try {
        if (v.is_number()) return FreqProfile::constant(v.get<double>());
        if (v.is_array()) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& e : v) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    throw ConfigError(ctx + ": pairs must be [freq_hz, value]");
                }
                pts.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
            return FreqProfile::table(std::move(pts));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ctx + ": " + e.what());
    }
    throw ConfigError(ctx + ": expected a number or [[freq_hz, value], ...] pairs");
}

std::vector<double> linspace(double start, double stop, int points, const std::string& ctx) {
    if (points == 1) {
        if (start != stop) throw ConfigError(ctx + ": a single point needs start == stop");
        return {start};
    }
    if (!(start < stop)) throw ConfigError(ctx + ": start must be < stop");
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        out[static_cast<std::size_t>(i)] =
            start + (stop - start) * static_cast<double>(i) / (points - 1);
    }
    out.back() = stop;
    return out;
}

void check_label(const std::string& label, const std::string& ctx) {
    if (label.empty()) throw ConfigError(ctx + ": label must be non-empty");
    for (char c : label) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) {
            throw ConfigError(ctx + ": label '" + label +
                              "' may only contain [A-Za-z0-9_.-]");
        }
    }
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("'" + path.string() + "' is not valid JSON");
    }
    return doc;
}

ChainConfig parse_chain_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(doc, "config",
                        {"frequency_grid", "stages", "idler_mode", "pump_freq_hz", "band_avg"});

    ChainConfig cfg;

    const json& grid = require_key(doc, "config", "frequency_grid");
    if (!grid.is_object()) throw ConfigError("config.frequency_grid: expected an object");
    reject_unknown_keys(grid, "config.frequency_grid", {"start_hz", "stop_hz", "points"});
    cfg.freq_grid_hz = linspace(
        as_number(require_key(grid, "config.frequency_grid", "start_hz"),
                  "config.frequency_grid.start_hz"),
        as_number(require_key(grid, "config.frequency_grid", "stop_hz"),
                  "config.frequency_grid.stop_hz"),
        as_points(require_key(grid, "config.frequency_grid", "points"),
                  "config.frequency_grid.points"),
        "config.frequency_grid");

    const json& stages = require_key(doc, "config", "stages");
    if (!stages.is_array() || stages.empty()) {
        throw ConfigError("config.stages: expected a non-empty array");
    }
    std::set<std::string> labels;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const json& st = stages[i];
        const std::string ctx = "config.stages[" + std::to_string(i) + "]";
        if (!st.is_object()) throw ConfigError(ctx + ": expected an object");
        const std::string kind = as_string(require_key(st, ctx, "kind"), ctx + ".kind");
        const std::string label = as_string(require_key(st, ctx, "label"), ctx + ".label");
        check_label(label, ctx);
        if (!labels.insert(label).second) {
            throw ConfigError(ctx + ": duplicate stage label '" + label + "'");
        }

        StageSpec spec;
        spec.label = label;
        if (kind == "loss") {
            reject_unknown_keys(st, ctx, {"kind", "label", "stage_temp_k", "eta", "eta_idler"});
            spec.kind = StageKind::Loss;
            spec.bath_k = as_number(require_key(st, ctx, "stage_temp_k"), ctx + ".stage_temp_k");
            spec.stage_temp_k = spec.bath_k;
            spec.eta = as_profile(require_key(st, ctx, "eta"), ctx + ".eta");
            if (st.contains("eta_idler")) {
                spec.eta_idler = as_profile(st["eta_idler"], ctx + ".eta_idler");
            }
        } else if (kind == "paramp") {
            reject_unknown_keys(st, ctx, {"kind", "label", "stage_temp_k", "gain_db", "excess_k"});
            spec.kind = StageKind::ParametricAmp;
            spec.gain_db = as_profile(require_key(st, ctx, "gain_db"), ctx + ".gain_db");
            if (st.contains("excess_k")) {
                spec.excess_k = as_number(st["excess_k"], ctx + ".excess_k");
            }
            if (st.contains("stage_temp_k")) {
                spec.stage_temp_k = as_number(st["stage_temp_k"], ctx + ".stage_temp_k");
            }
        } else if (kind == "follower") {
            reject_unknown_keys(st, ctx,
                                {"kind", "label", "stage_temp_k", "gain_db", "added_noise_k"});
            spec.kind = StageKind::Follower;
            spec.gain_db = as_profile(require_key(st, ctx, "gain_db"), ctx + ".gain_db");
            spec.added_noise_k =
                as_profile(require_key(st, ctx, "added_noise_k"), ctx + ".added_noise_k");
            if (st.contains("stage_temp_k")) {
                spec.stage_temp_k = as_number(st["stage_temp_k"], ctx + ".stage_temp_k");
            }
        } else {
            throw ConfigError(ctx + ".kind: expected loss|paramp|follower, got '" + kind + "'");
        }
        cfg.stages.push_back(std::move(spec));
    }

    if (doc.contains("idler_mode")) {
        const std::string m = as_string(doc["idler_mode"], "config.idler_mode");
        if (m == "same-as-signal") {
            cfg.idler_mode = IdlerMode::SameAsSignal;
        } else if (m == "explicit") {
            cfg.idler_mode = IdlerMode::ExplicitProfile;
        } else if (m == "at-idler-frequency") {
            cfg.idler_mode = IdlerMode::AtIdlerFrequency;
        } else {
            throw ConfigError(
                "config.idler_mode: expected same-as-signal|explicit|at-idler-frequency");
        }
    }
    if (doc.contains("pump_freq_hz")) {
        cfg.pump_freq_hz = as_number(doc["pump_freq_hz"], "config.pump_freq_hz");
    }
    if (doc.contains("band_avg")) {
        const json& b = doc["band_avg"];
        if (!b.is_object()) throw ConfigError("config.band_avg: expected an object");
        reject_unknown_keys(b, "config.band_avg", {"lo_hz", "hi_hz"});
        cfg.band_hz = {as_number(require_key(b, "config.band_avg", "lo_hz"),
                                 "config.band_avg.lo_hz"),
                       as_number(require_key(b, "config.band_avg", "hi_hz"),
                                 "config.band_avg.hi_hz")};
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ChainConfig load_chain_config(const std::filesystem::path& path) {
    return parse_chain_config(load_json_file(path));
}

SynthSpec parse_synth_spec(const json& doc) {
    if (!doc.is_object()) throw ConfigError("synth spec: expected a JSON object");
    SynthSpec s;
    s.kind = as_string(require_key(doc, "synth spec", "kind"), "synth_spec.kind");
    if (s.kind == "sntj") {
        reject_unknown_keys(doc, "synth spec",
                            {"kind", "frequency_hz", "chain_gain", "n_sigma_off_quanta",
                             "rel_noise", "seed", "temperature_k", "resistance_ohm",
                             "v_offset_v", "bias_grid", "bias_current_grid"});
    } else if (s.kind == "vts") {
        reject_unknown_keys(doc, "synth spec",
                            {"kind", "frequency_hz", "chain_gain", "n_sigma_quanta",
                             "rel_noise", "seed", "temperatures_k"});
    } else {
        throw ConfigError("synth_spec.kind: expected sntj|vts, got '" + s.kind + "'");
    }
    s.frequency_hz =
        as_number(require_key(doc, "synth spec", "frequency_hz"), "synth_spec.frequency_hz");
    s.chain_gain =
        as_number(require_key(doc, "synth spec", "chain_gain"), "synth_spec.chain_gain");
    if (doc.contains("rel_noise")) {
        s.rel_noise = as_number(doc["rel_noise"], "synth_spec.rel_noise");
    }
    if (doc.contains("seed")) s.seed = as_seed(doc["seed"], "synth_spec.seed");

    try {
        if (s.kind == "sntj") {
            s.n_sigma_off_quanta = as_number(require_key(doc, "synth spec", "n_sigma_off_quanta"),
                                             "synth_spec.n_sigma_off_quanta");
            s.sntj.temperature_k = as_number(require_key(doc, "synth spec", "temperature_k"),
                                             "synth_spec.temperature_k");
            if (doc.contains("resistance_ohm")) {
                s.sntj.resistance_ohm =
                    as_number(doc["resistance_ohm"], "synth_spec.resistance_ohm");
            }
            if (doc.contains("v_offset_v")) {
                s.sntj.v_offset_v = as_number(doc["v_offset_v"], "synth_spec.v_offset_v");
            }
            const bool volts = doc.contains("bias_grid");
            const bool amps = doc.contains("bias_current_grid");
            if (volts == amps) {
                throw ConfigError(
                    "synth spec: provide exactly one of bias_grid or bias_current_grid");
            }
            const json& g = volts ? doc["bias_grid"] : doc["bias_current_grid"];
            const std::string ctx =
                volts ? "synth_spec.bias_grid" : "synth_spec.bias_current_grid";
            if (!g.is_object()) throw ConfigError(ctx + ": expected an object");
            const char* lo_key = volts ? "start_v" : "start_a";
            const char* hi_key = volts ? "stop_v" : "stop_a";
            reject_unknown_keys(g, ctx, {lo_key, hi_key, "points"});
            auto grid = linspace(as_number(require_key(g, ctx, lo_key), ctx),
                                 as_number(require_key(g, ctx, hi_key), ctx),
                                 as_points(require_key(g, ctx, "points"), ctx + ".points"), ctx);
            if (!volts) {
                for (double& v : grid) {
                    v = bias_voltage_from_current(v, s.sntj.resistance_ohm);
                }
            }
            s.sntj.bias_grid_v = std::move(grid);
            s.sntj.validate();
        } else {
            s.n_sigma_off_quanta = as_number(require_key(doc, "synth spec", "n_sigma_quanta"),
                                             "synth_spec.n_sigma_quanta");
            const json& temps = require_key(doc, "synth spec", "temperatures_k");
            if (!temps.is_array()) {
                throw ConfigError("synth_spec.temperatures_k: expected an array");
            }
            for (const auto& t : temps) {
                s.vts.temperatures_k.push_back(as_number(t, "synth_spec.temperatures_k[]"));
            }
            s.vts.validate();
        }
        Frequency f(s.frequency_hz);
        if (!(s.chain_gain > 0.0)) throw ConfigError("synth_spec.chain_gain must be > 0");
        if (s.rel_noise < 0.0) throw ConfigError("synth_spec.rel_noise must be >= 0");
        if (s.n_sigma_off_quanta < 0.0) {
            throw ConfigError("synth spec: added noise must be >= 0 quanta");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("synth spec: ") + e.what());
    }
    return s;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
    return parse_synth_spec(load_json_file(path));
}

NoiseCurve run_synth(const SynthSpec& spec) {
    if (spec.kind == "sntj") {
        return synthesize_sntj_curve(spec.sntj, spec.chain_gain, spec.n_sigma_off_quanta,
                                     spec.frequency_hz, spec.rel_noise, spec.seed);
    }
    return synthesize_vts_curve(spec.vts, spec.chain_gain, spec.n_sigma_off_quanta,
                                spec.frequency_hz, spec.rel_noise, spec.seed);
}

PumpSpec parse_pump_spec(const json& doc) {
    if (!doc.is_object()) throw ConfigError("pump spec: expected a JSON object");
    reject_unknown_keys(doc, "pump spec", {"delivered_dbm", "path"});
    PumpSpec s;
    s.delivered_dbm =
        as_number(require_key(doc, "pump spec", "delivered_dbm"), "pump_spec.delivered_dbm");
    const json& path = require_key(doc, "pump spec", "path");
    if (!path.is_array()) throw ConfigError("pump_spec.path: expected an array");
    for (std::size_t i = 0; i < path.size(); ++i) {
        const json& e = path[i];
        const std::string ctx = "pump_spec.path[" + std::to_string(i) + "]";
        if (!e.is_object()) throw ConfigError(ctx + ": expected an object");
        const std::string kind = as_string(require_key(e, ctx, "kind"), ctx + ".kind");
        PumpPathElement el;
        el.label = as_string(require_key(e, ctx, "label"), ctx + ".label");
        check_label(el.label, ctx);
        el.stage_temp_k = as_number(require_key(e, ctx, "stage_temp_k"), ctx + ".stage_temp_k");
        if (kind == "attenuator") {
            reject_unknown_keys(e, ctx, {"kind", "label", "attenuation_db", "stage_temp_k"});
            el.kind = PumpPathElement::Kind::Attenuator;
            el.db = as_number(require_key(e, ctx, "attenuation_db"), ctx + ".attenuation_db");
        } else if (kind == "coupler") {
            reject_unknown_keys(
                e, ctx, {"kind", "label", "coupling_db", "stage_temp_k", "termination_temp_k"});
            el.kind = PumpPathElement::Kind::Coupler;
            el.db = as_number(require_key(e, ctx, "coupling_db"), ctx + ".coupling_db");
            el.termination_temp_k = as_number(require_key(e, ctx, "termination_temp_k"),
                                              ctx + ".termination_temp_k");
        } else {
            throw ConfigError(ctx + ".kind: expected attenuator|coupler, got '" + kind + "'");
        }
        if (el.db < 0.0) throw ConfigError(ctx + ": dB value must be >= 0");
        s.path.push_back(std::move(el));
    }
    return s;
}

PumpSpec load_pump_spec(const std::filesystem::path& path) {
    return parse_pump_spec(load_json_file(path));
}

McRequest parse_mc_spec(const json& doc) {
    if (!doc.is_object()) throw ConfigError("mc spec: expected a JSON object");
    reject_unknown_keys(doc, "mc spec", {"n_samples", "seed", "priors"});
    McRequest r;
    r.n_samples = as_points(require_key(doc, "mc spec", "n_samples"), "mc_spec.n_samples");
    if (doc.contains("seed")) r.seed = as_seed(doc["seed"], "mc_spec.seed");
    const json& priors = require_key(doc, "mc spec", "priors");
    if (!priors.is_array()) throw ConfigError("mc_spec.priors: expected an array");
    for (std::size_t i = 0; i < priors.size(); ++i) {
        const json& p = priors[i];
        const std::string ctx = "mc_spec.priors[" + std::to_string(i) + "]";
        if (!p.is_object()) throw ConfigError(ctx + ": expected an object");
        reject_unknown_keys(p, ctx, {"target", "sigma"});
        McPrior prior;
        prior.target = as_string(require_key(p, ctx, "target"), ctx + ".target");
        prior.sigma = as_number(require_key(p, ctx, "sigma"), ctx + ".sigma");
        if (prior.sigma < 0.0) throw ConfigError(ctx + ".sigma must be >= 0");
        r.priors.push_back(std::move(prior));
    }
    return r;
}

McRequest load_mc_spec(const std::filesystem::path& path) {
    return parse_mc_spec(load_json_file(path));
}

std::string chain_report_csv(const ChainNoiseReport& report,
                             const std::vector<double>& n_sigma_off_quanta) {
    std::ostringstream out;
    out << "frequency_hz,n_sigma_quanta,t_sigma_k,n_sigma_off_quanta,chain_gain_linear";
    for (const auto& row : report.stages) {
        out << ',' << row.label << "_intrinsic_k," << row.label << "_input_referred_k";
    }
    out << '\n';
    for (std::size_t k = 0; k < report.freq_hz.size(); ++k) {
        const double f = report.freq_hz[k];
        out << csv::num(f) << ',' << csv::num(report.n_sigma_quanta[k]) << ','
            << csv::num(report.t_sigma_k[k]) << ',' << csv::num(n_sigma_off_quanta[k]) << ','
            << csv::num(report.chain_gain_linear[k]);
        for (const auto& row : report.stages) {
            out << ',' << csv::num(raw::occupancy_to_kelvin(row.intrinsic_quanta[k], f)) << ','
                << csv::num(raw::occupancy_to_kelvin(row.input_referred_quanta[k], f));
        }
        out << '\n';
    }
    return out.str();
}

namespace {

const char* kind_name(StageKind k) {
    switch (k) {
        case StageKind::Loss: return "loss";
        case StageKind::ParametricAmp: return "paramp";
        case StageKind::Follower: return "follower";
    }
    return "?";
}

}  // namespace

json band_table_json(const BandAverageTable& table) {
    json stages = json::array();
    for (const auto& r : table.rows) {
        json row{{"label", r.label},
                 {"kind", kind_name(r.kind)},
                 {"intrinsic_k", r.intrinsic_k},
                 {"input_referred_k", r.input_referred_k}};
        if (r.transmission_efficiency) {
            row["transmission_efficiency"] = *r.transmission_efficiency;
            row["insertion_loss_db"] = *r.insertion_loss_db;
        }
        stages.push_back(std::move(row));
    }
    return json{{"band_lo_hz", table.lo_hz},
                {"band_hi_hz", table.hi_hz},
                {"t_sigma_k", table.t_sigma_k},
                {"n_sigma_quanta", table.n_sigma_quanta},
                {"chain_gain_db", table.chain_gain_db},
                {"low_gain_flag", table.low_gain_flag},
                {"stages", stages}};
}

std::string band_table_csv(const BandAverageTable& table) {
    std::ostringstream out;
    out << "quantity";
    for (const auto& r : table.rows) out << ',' << r.label;
    out << "\ntransmission_efficiency";
    for (const auto& r : table.rows) {
        out << ',';
        if (r.transmission_efficiency) out << csv::num(*r.transmission_efficiency);
    }
    out << "\ninsertion_loss_db";
    for (const auto& r : table.rows) {
        out << ',';
        if (r.insertion_loss_db) out << csv::num(*r.insertion_loss_db);
    }
    out << "\nintrinsic_k";
    for (const auto& r : table.rows) out << ',' << csv::num(r.intrinsic_k);
    out << "\ninput_referred_k";
    for (const auto& r : table.rows) out << ',' << csv::num(r.input_referred_k);
    out << '\n';
    return out.str();
}

json shot_fit_json(const ShotFitResult& r, double frequency_hz) {
    return json{{"frequency_hz", frequency_hz},
                {"chain_gain", r.chain_gain},
                {"n_sigma_off_quanta", r.n_sigma_off_quanta},
                {"source_temp_k", r.source_temp_k},
                {"v_offset_v", r.v_offset_v},
                {"residual_rms", r.residual_rms},
                {"stage1_window_v", {r.stage1_window_v.first, r.stage1_window_v.second}},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"warnings",
                 {{"n_sigma_off_bound_active", r.bound_active_n_sigma_off},
                  {"temp_bound_active", r.bound_active_temp}}},
                {"final_cost", r.final_cost}};
}

std::string shot_fit_csv(const ShotFitResult& r, double frequency_hz) {
    std::ostringstream out;
    out << "frequency_hz,chain_gain,n_sigma_off_quanta,source_temp_k,v_offset_v,"
           "residual_rms,iterations,converged,n_sigma_off_bound_active,temp_bound_active\n"
        << csv::num(frequency_hz) << ',' << csv::num(r.chain_gain) << ','
        << csv::num(r.n_sigma_off_quanta) << ',' << csv::num(r.source_temp_k) << ','
        << csv::num(r.v_offset_v) << ',' << csv::num(r.residual_rms) << ',' << r.iterations
        << ',' << (r.converged ? 1 : 0) << ',' << (r.bound_active_n_sigma_off ? 1 : 0) << ','
        << (r.bound_active_temp ? 1 : 0) << '\n';
    return out.str();
}

std::string shot_fit_residuals_csv(const NoiseCurve& curve, double frequency_hz,
                                   const ShotFitResult& r) {
    std::ostringstream out;
    out << "x_value,y_measured,y_model,residual\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        const double model =
            r.chain_gain * (sntj_occupancy_raw(curve.x[i] - r.v_offset_v, r.source_temp_k,
                                               frequency_hz) +
                            r.n_sigma_off_quanta);
        out << csv::num(curve.x[i]) << ',' << csv::num(curve.y[i]) << ',' << csv::num(model)
            << ',' << csv::num(curve.y[i] - model) << '\n';
    }
    return out.str();
}

json johnson_fit_json(const JohnsonFitResult& r, double frequency_hz) {
    return json{{"frequency_hz", frequency_hz},
                {"chain_gain", r.chain_gain},
                {"n_sigma_quanta", r.n_sigma_quanta},
                {"residual_rms", r.residual_rms}};
}

std::string johnson_fit_csv(const JohnsonFitResult& r, double frequency_hz) {
    std::ostringstream out;
    out << "frequency_hz,chain_gain,n_sigma_quanta,residual_rms\n"
        << csv::num(frequency_hz) << ',' << csv::num(r.chain_gain) << ','
        << csv::num(r.n_sigma_quanta) << ',' << csv::num(r.residual_rms) << '\n';
    return out.str();
}

std::string johnson_fit_residuals_csv(const NoiseCurve& curve, double frequency_hz,
                                      const JohnsonFitResult& r) {
    std::ostringstream out;
    out << "x_value,y_measured,y_model,residual\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        const double model =
            r.chain_gain *
            (johnson_occupancy_raw(curve.x[i], frequency_hz) + r.n_sigma_quanta);
        out << csv::num(curve.x[i]) << ',' << csv::num(curve.y[i]) << ',' << csv::num(model)
            << ',' << csv::num(curve.y[i] - model) << '\n';
    }
    return out.str();
}

std::string noise_rise_csv(const std::vector<double>& freq_hz, const std::vector<double>& r,
                           const std::vector<double>& gain_linear,
                           const std::vector<double>& n_sigma_off_quanta,
                           const std::vector<double>& n_sigma_quanta) {
    std::ostringstream out;
    out << "frequency_hz,noise_rise,gain_linear,n_sigma_off_quanta,n_sigma_quanta,t_sigma_k\n";
    for (std::size_t k = 0; k < freq_hz.size(); ++k) {
        out << csv::num(freq_hz[k]) << ',' << csv::num(r[k]) << ',' << csv::num(gain_linear[k])
            << ',' << csv::num(n_sigma_off_quanta[k]) << ',' << csv::num(n_sigma_quanta[k])
            << ',' << csv::num(raw::occupancy_to_kelvin(n_sigma_quanta[k], freq_hz[k]))
            << '\n';
    }
    return out.str();
}

std::string gain_sweep_csv(const std::vector<std::pair<double, double>>& sweep) {
    std::ostringstream out;
    out << "gain_db,gain_linear,t_sigma_k\n";
    for (const auto& [g, t] : sweep) {
        out << csv::num(linear_to_db(g)) << ',' << csv::num(g) << ',' << csv::num(t) << '\n';
    }
    return out.str();
}

namespace {

json stats_json(const McStats& s) {
    return json{{"mean", s.mean}, {"stddev", s.stddev}};
}

}  // namespace

json budget_report_json(const BudgetReport& rep) {
    json out = json::object();
    if (rep.eta_p) {
        out["packaging_efficiency"] = {{"eta", rep.eta_p->eta},
                                       {"flagged_above_unity", rep.eta_p->flagged_above_unity}};
    }
    if (!rep.freq_hz.empty()) out["frequency_hz"] = rep.freq_hz;
    if (rep.t_h_k) out["t_h_k"] = *rep.t_h_k;
    if (rep.t_ex_k) out["t_ex_k"] = *rep.t_ex_k;
    if (rep.table) out["band_table"] = band_table_json(*rep.table);
    if (rep.dc) {
        out["dc_power"] = {{"power_w", rep.dc->power_w},
                           {"resistance_ohm", rep.dc->resistance_ohm}};
    }
    if (!rep.power_entries.empty()) {
        json entries = json::array();
        for (const auto& e : rep.power_entries) {
            entries.push_back({{"label", e.label},
                               {"stage_temp_k", e.stage_temp_k},
                               {"dissipated_w", e.dissipated_w}});
        }
        out["power_entries"] = entries;
    }
    if (rep.mc) {
        json mc{{"frequency_hz", rep.mc->freq_hz},
                {"t_sigma_k", stats_json(rep.mc->t_sigma_k)},
                {"t_sigma_off_k", stats_json(rep.mc->t_sigma_off_k)}};
        if (rep.mc->t_h_k) mc["t_h_k"] = stats_json(*rep.mc->t_h_k);
        if (rep.mc->t_ex_k) mc["t_ex_k"] = stats_json(*rep.mc->t_ex_k);
        out["monte_carlo"] = mc;
    }
    return out;
}

std::string budget_inferred_csv(const BudgetReport& rep) {
    std::ostringstream out;
    out << "frequency_hz";
    if (rep.t_h_k) out << ",t_h_k";
    if (rep.t_ex_k) out << ",t_ex_k";
    out << '\n';
    for (std::size_t k = 0; k < rep.freq_hz.size(); ++k) {
        out << csv::num(rep.freq_hz[k]);
        if (rep.t_h_k) out << ',' << csv::num((*rep.t_h_k)[k]);
        if (rep.t_ex_k) out << ',' << csv::num((*rep.t_ex_k)[k]);
        out << '\n';
    }
    return out.str();
}

std::string pump_budget_csv(const PumpBudget& b) {
    std::ostringstream out;
    out << "label,stage_temp_k,dissipated_w\n";
    for (const auto& e : b.entries) {
        out << e.label << ',' << csv::num(e.stage_temp_k) << ',' << csv::num(e.dissipated_w)
            << '\n';
    }
    return out.str();
}

json pump_budget_json(const PumpBudget& b) {
    json entries = json::array();
    for (const auto& e : b.entries) {
        entries.push_back({{"label", e.label},
                           {"stage_temp_k", e.stage_temp_k},
                           {"dissipated_w", e.dissipated_w}});
    }
    json totals = json::array();
    for (const auto& [stage, w] : b.totals_by_stage) {
        totals.push_back({{"stage_temp_k", stage}, {"dissipated_w", w}});
    }
    return json{{"delivered_w", b.delivered_w},
                {"input_w", b.input_w},
                {"entries", entries},
                {"totals_by_stage", totals}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw ConfigError("failed while writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace chainnoise::io
