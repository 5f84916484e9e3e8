#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "chainnoise/budget.hpp"
#include "chainnoise/chain.hpp"
#include "chainnoise/config_io.hpp"
#include "chainnoise/csv.hpp"
#include "chainnoise/errors.hpp"
#include "chainnoise/fitter.hpp"
#include "chainnoise/quanta.hpp"
#include "chainnoise/sources.hpp"
#include "chainnoise/units.hpp"

namespace fs = std::filesystem;
using namespace chainnoise;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::string band;
    std::string format = "both";

    bool want_csv() const { return format != "json"; }
    bool want_json() const { return format != "csv"; }
};

// All output content is assembled before anything touches the filesystem, and
// each file lands via a temp-and-rename, so failed commands leave no partial
// artifacts behind.
class OutputSet {
  public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    void add(const std::string& name, std::string content) {
        files_.emplace_back(dir_ / name, std::move(content));
    }
    void commit() {
        fs::create_directories(dir_);
        for (auto& [path, content] : files_) io::write_file_atomic(path, content);
        for (auto& [path, content] : files_) {
            std::cout << "wrote " << path.string() << "\n";
        }
    }

  private:
    fs::path dir_;
    std::vector<std::pair<fs::path, std::string>> files_;
};

std::pair<double, double> band_window(const GlobalOpts& g, const ChainConfig& cfg) {
    if (!g.band.empty()) return units::parse_range(g.band, units::Unit::Hertz);
    if (cfg.band_hz) return *cfg.band_hz;
    return {cfg.freq_grid_hz.front(), cfg.freq_grid_hz.back()};
}

ChainConfig load_config(const GlobalOpts& g) {
    if (g.config_path.empty()) throw ConfigError("this command requires --config");
    return io::load_chain_config(g.config_path);
}

NoiseCurve load_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return noise_curve_from_csv(in);
}

double resolve_frequency(const NoiseCurve& curve, const std::string& flag) {
    if (flag.empty()) return curve.frequency_hz;
    const double f = units::parse_quantity(flag, units::Unit::Hertz);
    if (std::abs(f - curve.frequency_hz) > 1e-9 * f) {
        throw ConfigError("--frequency does not match the curve file (" +
                          csv::num(curve.frequency_hz) + " Hz)");
    }
    return f;
}

csv::Table load_table(const std::string& path, const std::vector<std::string>& columns) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    csv::Table t = csv::read(in);
    csv::require_columns(t, columns);
    if (t.rows.empty()) throw ConfigError("'" + path + "' contains no data rows");
    return t;
}

void require_matching_grid(const std::vector<double>& freq, const ChainConfig& cfg,
                           const std::string& what) {
    if (freq != cfg.freq_grid_hz) {
        throw ConfigError(what + ": frequency column must match the config grid exactly");
    }
}

// Linear gain, either a bare ratio or a dB-suffixed value.
double parse_gain(const std::string& text) {
    if (text.size() > 2 && text.substr(text.size() - 2) == "dB") {
        return db_to_linear(units::parse_quantity(text, units::Unit::Decibel));
    }
    return units::parse_quantity(text, units::Unit::Decibel);
}

void cmd_simulate(const GlobalOpts& g) {
    const ChainConfig cfg = load_config(g);
    const auto [lo, hi] = band_window(g, cfg);

    const bool has_amp = cfg.paramp_index() >= 0;
    const ChainNoiseReport report =
        has_amp ? chain_added_noise(cfg) : chain_added_noise_off_report(cfg);
    const std::vector<double> n_off = chain_added_noise_off(cfg);
    const BandAverageTable table = band_average(report, cfg, lo, hi);

    OutputSet out(g.out_dir);
    if (g.want_csv()) out.add("simulate_frequency.csv", io::chain_report_csv(report, n_off));
    if (g.want_json()) out.add("simulate_band.json", io::band_table_json(table).dump(2) + "\n");
    out.commit();
}

void cmd_sweep_gain(const GlobalOpts& g, const std::string& gains_csv,
                    const std::string& gains_range, const std::string& freq_flag) {
    const ChainConfig cfg = load_config(g);
    std::vector<double> gains;
    if (!gains_csv.empty()) {
        std::size_t start = 0;
        while (start <= gains_csv.size()) {
            const std::size_t comma = gains_csv.find(',', start);
            const std::string tok = gains_csv.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            gains.push_back(db_to_linear(units::parse_quantity(tok, units::Unit::Decibel)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else if (!gains_range.empty()) {
        // lo:hi:step, all in dB
        const std::size_t c1 = gains_range.find(':');
        const std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                                         : gains_range.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw ConfigError("--gains-range must look like lo:hi:step (dB)");
        }
        const double lo = units::parse_quantity(gains_range.substr(0, c1), units::Unit::Decibel);
        const double hi =
            units::parse_quantity(gains_range.substr(c1 + 1, c2 - c1 - 1), units::Unit::Decibel);
        const double step = units::parse_quantity(gains_range.substr(c2 + 1),
                                                  units::Unit::Decibel);
        if (!(step > 0.0) || !(hi > lo)) {
            throw ConfigError("--gains-range needs hi > lo and step > 0");
        }
        for (double db = lo; db <= hi + 1e-9; db += step) gains.push_back(db_to_linear(db));
    } else {
        throw ConfigError("sweep-gain requires --gains or --gains-range");
    }

    std::vector<std::pair<double, double>> sweep;
    if (!freq_flag.empty()) {
        sweep = gain_sweep_at(cfg, gains, units::parse_quantity(freq_flag, units::Unit::Hertz));
    } else {
        ChainConfig c = cfg;
        if (!g.band.empty()) c.band_hz = units::parse_range(g.band, units::Unit::Hertz);
        sweep = gain_sweep(c, gains);
    }

    OutputSet out(g.out_dir);
    out.add("gain_sweep.csv", io::gain_sweep_csv(sweep));
    out.commit();
}

void cmd_synth(const GlobalOpts& g, const std::string& spec_path) {
    io::SynthSpec spec = io::load_synth_spec(spec_path);
    if (g.seed) spec.seed = *g.seed;
    const NoiseCurve curve = io::run_synth(spec);
    OutputSet out(g.out_dir);
    out.add("noise_curve.csv", noise_curve_to_csv(curve));
    out.commit();
}

void cmd_fit_shot(const GlobalOpts& g, const std::string& data_path,
                  const std::string& freq_flag) {
    const NoiseCurve curve = load_curve(data_path);
    const double f = resolve_frequency(curve, freq_flag);
    const ShotFitResult r = fit_shot(curve, f);

    OutputSet out(g.out_dir);
    if (g.want_json()) out.add("fit_shot.json", io::shot_fit_json(r, f).dump(2) + "\n");
    if (g.want_csv()) {
        out.add("fit_shot.csv", io::shot_fit_csv(r, f));
        out.add("fit_shot_residuals.csv", io::shot_fit_residuals_csv(curve, f, r));
    }
    out.commit();
}

void cmd_fit_johnson(const GlobalOpts& g, const std::string& data_path,
                     const std::string& freq_flag) {
    const NoiseCurve curve = load_curve(data_path);
    const double f = resolve_frequency(curve, freq_flag);
    const JohnsonFitResult r = fit_johnson(curve, f);

    OutputSet out(g.out_dir);
    if (g.want_json()) out.add("fit_johnson.json", io::johnson_fit_json(r, f).dump(2) + "\n");
    if (g.want_csv()) {
        out.add("fit_johnson.csv", io::johnson_fit_csv(r, f));
        out.add("fit_johnson_residuals.csv", io::johnson_fit_residuals_csv(curve, f, r));
    }
    out.commit();
}

void cmd_noise_rise(const GlobalOpts& g, const std::string& rise_path,
                    const std::string& gain_path, const std::string& off_path) {
    const csv::Table rise_t = load_table(rise_path, {"frequency_hz", "noise_rise"});
    const auto freq = csv::column_as_double(rise_t, "frequency_hz");
    const auto rises = csv::column_as_double(rise_t, "noise_rise");

    const csv::Table gain_t = load_table(gain_path, {"frequency_hz"});
    std::vector<double> gains;
    if (std::find(gain_t.header.begin(), gain_t.header.end(), "gain_linear") !=
        gain_t.header.end()) {
        gains = csv::column_as_double(gain_t, "gain_linear");
    } else {
        for (double db : csv::column_as_double(gain_t, "gain_db")) {
            gains.push_back(db_to_linear(db));
        }
    }
    const csv::Table off_t = load_table(off_path, {"frequency_hz", "n_sigma_off_quanta"});
    const auto offs = csv::column_as_double(off_t, "n_sigma_off_quanta");

    if (csv::column_as_double(gain_t, "frequency_hz") != freq ||
        csv::column_as_double(off_t, "frequency_hz") != freq) {
        throw ConfigError("noise-rise inputs must share an identical frequency column");
    }

    std::vector<double> n_sigma(freq.size());
    for (std::size_t k = 0; k < freq.size(); ++k) {
        n_sigma[k] = noise_from_rise(rises[k], GainLinear(gains[k]), Occupancy(offs[k])).quanta;
    }

    OutputSet out(g.out_dir);
    out.add("noise_rise.csv", io::noise_rise_csv(freq, rises, gains, offs, n_sigma));
    out.commit();
}

void cmd_budget(const GlobalOpts& g, const std::string& off_path, const std::string& tsig_path,
                const std::string& gain_sntj, const std::string& gain_vts,
                const std::string& dc_v, const std::string& dc_i,
                const std::string& pump_spec, const std::string& mc_spec) {
    const ChainConfig cfg = load_config(g);
    const auto [lo, hi] = band_window(g, cfg);

    BudgetReport rep;
    rep.freq_hz = cfg.freq_grid_hz;

    std::optional<std::vector<double>> measured_off, measured_tsig;
    if (!off_path.empty()) {
        const csv::Table t = load_table(off_path, {"frequency_hz", "n_sigma_off_quanta"});
        require_matching_grid(csv::column_as_double(t, "frequency_hz"), cfg, off_path);
        measured_off = csv::column_as_double(t, "n_sigma_off_quanta");
    }
    if (!tsig_path.empty()) {
        const csv::Table t = load_table(tsig_path, {"frequency_hz", "t_sigma_k"});
        require_matching_grid(csv::column_as_double(t, "frequency_hz"), cfg, tsig_path);
        measured_tsig = csv::column_as_double(t, "t_sigma_k");
    }

    ChainConfig working = cfg;
    if (measured_off) {
        rep.t_h_k = infer_follower_noise_k(working, *measured_off);
        // Push the inferred follower noise back into the chain for the
        // downstream excess-noise inference.
        for (auto& st : working.stages) {
            if (st.kind == StageKind::Follower) {
                std::vector<std::pair<double, double>> pts;
                if (working.freq_grid_hz.size() == 1) {
                    st.added_noise_k = FreqProfile::constant(rep.t_h_k->front());
                } else {
                    for (std::size_t k = 0; k < working.freq_grid_hz.size(); ++k) {
                        pts.emplace_back(working.freq_grid_hz[k], (*rep.t_h_k)[k]);
                    }
                    st.added_noise_k = FreqProfile::table(std::move(pts));
                }
            }
        }
    }
    if (measured_tsig) {
        rep.t_ex_k = infer_excess_noise_k(working, *measured_tsig);
    }
    if (!gain_sntj.empty() || !gain_vts.empty()) {
        if (gain_sntj.empty() || gain_vts.empty()) {
            throw ConfigError("packaging efficiency needs both --gain-sntj and --gain-vts");
        }
        rep.eta_p = infer_packaging_efficiency(parse_gain(gain_sntj), parse_gain(gain_vts));
    }
    if (!dc_v.empty() || !dc_i.empty()) {
        if (dc_v.empty() || dc_i.empty()) {
            throw ConfigError("dc power needs both --dc-voltage and --dc-current");
        }
        rep.dc = dc_power(units::parse_quantity(dc_v, units::Unit::Volts),
                          units::parse_quantity(dc_i, units::Unit::Amps));
    }
    if (!pump_spec.empty()) {
        const io::PumpSpec p = io::load_pump_spec(pump_spec);
        rep.power_entries = pump_dissipation(PowerDbm(p.delivered_dbm), p.path).entries;
    }

    const bool has_amp = cfg.paramp_index() >= 0;
    const ChainNoiseReport noise =
        has_amp ? chain_added_noise(working) : chain_added_noise_off_report(working);
    rep.table = band_average(noise, working, lo, hi);

    if (!mc_spec.empty()) {
        McRequest req = io::load_mc_spec(mc_spec);
        if (g.seed) req.seed = *g.seed;
        req.measured_n_sigma_off_quanta = measured_off;
        req.measured_t_sigma_k = measured_tsig;
        rep.mc = mc_uncertainty(cfg, req);
    }

    OutputSet out(g.out_dir);
    if (g.want_json()) out.add("budget.json", io::budget_report_json(rep).dump(2) + "\n");
    if (g.want_csv()) {
        out.add("budget_table.csv", io::band_table_csv(*rep.table));
        if (rep.t_h_k || rep.t_ex_k) {
            out.add("budget_inferred.csv", io::budget_inferred_csv(rep));
        }
    }
    out.commit();
}

void cmd_pump_power(const GlobalOpts& g, const std::string& spec_path) {
    const io::PumpSpec spec = io::load_pump_spec(spec_path);
    const PumpBudget b = pump_dissipation(PowerDbm(spec.delivered_dbm), spec.path);
    OutputSet out(g.out_dir);
    if (g.want_csv()) out.add("pump_power.csv", io::pump_budget_csv(b));
    if (g.want_json()) out.add("pump_power.json", io::pump_budget_json(b).dump(2) + "\n");
    out.commit();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise budgets, calibration fits, and power budgets for cryogenic "
                 "microwave amplification chains"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "Chain configuration JSON");
    app.add_option("--out-dir", g.out_dir, "Output directory (default: .)");
    app.add_option("--seed", g.seed, "Override RNG seeds from spec files");
    app.add_option("--band", g.band, "Band-average window, e.g. 3.5GHz:5.5GHz");
    app.add_option("--format", g.format, "Output formats: csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    auto* sim = app.add_subcommand("simulate", "Forward-model a chain's added noise");

    auto* sweep = app.add_subcommand("sweep-gain", "Added noise vs amplifier gain");
    std::string sweep_gains, sweep_range, sweep_freq;
    sweep->add_option("--gains", sweep_gains, "Comma-separated gains in dB, e.g. 2.5dB,18dB");
    sweep->add_option("--gains-range", sweep_range, "lo:hi:step in dB");
    sweep->add_option("--frequency", sweep_freq, "Evaluate at one frequency, e.g. 4.5GHz");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic noise curve");
    std::string synth_spec;
    synth->add_option("--spec", synth_spec, "Generator spec JSON")->required();

    auto* fshot = app.add_subcommand("fit-shot", "Two-stage shot-noise calibration fit");
    std::string fshot_data, fshot_freq;
    fshot->add_option("--data", fshot_data, "Noise curve CSV")->required();
    fshot->add_option("--frequency", fshot_freq, "Signal frequency, e.g. 4.5GHz");

    auto* fjohn = app.add_subcommand("fit-johnson", "Johnson-noise calibration fit");
    std::string fjohn_data, fjohn_freq;
    fjohn->add_option("--data", fjohn_data, "Noise curve CSV")->required();
    fjohn->add_option("--frequency", fjohn_freq, "Signal frequency, e.g. 4.5GHz");

    auto* nrise = app.add_subcommand("noise-rise", "Chain noise from on/off noise-rise data");
    std::string nr_rise, nr_gain, nr_off;
    nrise->add_option("--rise", nr_rise, "CSV: frequency_hz,noise_rise")->required();
    nrise->add_option("--gain", nr_gain, "CSV: frequency_hz,gain_db|gain_linear")->required();
    nrise->add_option("--n-sigma-off", nr_off, "CSV: frequency_hz,n_sigma_off_quanta")
        ->required();

    auto* budget = app.add_subcommand("budget", "Infer stage noises and assemble a budget");
    std::string b_off, b_tsig, b_gs, b_gv, b_dcv, b_dci, b_pump, b_mc;
    budget->add_option("--n-sigma-off", b_off, "Measured off-state noise CSV");
    budget->add_option("--t-sigma", b_tsig, "Measured chain-added noise CSV");
    budget->add_option("--gain-sntj", b_gs, "Chain gain against the junction reference");
    budget->add_option("--gain-vts", b_gv, "Chain gain against the thermal-stage reference");
    budget->add_option("--dc-voltage", b_dcv, "DC bias voltage drop, e.g. 80uV");
    budget->add_option("--dc-current", b_dci, "DC bias current, e.g. 1mA");
    budget->add_option("--pump-spec", b_pump, "Pump delivery path JSON");
    budget->add_option("--mc-spec", b_mc, "Monte Carlo priors JSON");

    auto* pump = app.add_subcommand("pump-power", "Pump dissipation along a delivery path");
    std::string pump_spec;
    pump->add_option("--spec", pump_spec, "Pump delivery path JSON")->required();

    sim->callback([&] { cmd_simulate(g); });
    sweep->callback([&] { cmd_sweep_gain(g, sweep_gains, sweep_range, sweep_freq); });
    synth->callback([&] { cmd_synth(g, synth_spec); });
    fshot->callback([&] { cmd_fit_shot(g, fshot_data, fshot_freq); });
    fjohn->callback([&] { cmd_fit_johnson(g, fjohn_data, fjohn_freq); });
    nrise->callback([&] { cmd_noise_rise(g, nr_rise, nr_gain, nr_off); });
    budget->callback([&] {
        cmd_budget(g, b_off, b_tsig, b_gs, b_gv, b_dcv, b_dci, b_pump, b_mc);
    });
    pump->callback([&] { cmd_pump_power(g, pump_spec); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
