#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "chainnoise/budget.hpp"
#include "chainnoise/chain.hpp"
#include "chainnoise/fitter.hpp"
#include "chainnoise/sources.hpp"

namespace chainnoise::io {

nlohmann::json load_json_file(const std::filesystem::path& path);  // ConfigError on failure

// Chain configuration document. Strictly validated: unknown keys are
// rejected with the offending key named.
ChainConfig parse_chain_config(const nlohmann::json& doc);
ChainConfig load_chain_config(const std::filesystem::path& path);

// Synthetic-curve generator spec (kind "sntj" or "vts").
struct SynthSpec {
    std::string kind;  // "sntj" | "vts"
    double frequency_hz = 0.0;
    double chain_gain = 1.0;
    double n_sigma_off_quanta = 0.0;
    double rel_noise = 0.0;
    std::uint64_t seed = 0;
    SntjParams sntj;
    VtsParams vts;
};
SynthSpec parse_synth_spec(const nlohmann::json& doc);
SynthSpec load_synth_spec(const std::filesystem::path& path);
NoiseCurve run_synth(const SynthSpec& spec);

struct PumpSpec {
    double delivered_dbm = 0.0;
    std::vector<PumpPathElement> path;
};
PumpSpec parse_pump_spec(const nlohmann::json& doc);
PumpSpec load_pump_spec(const std::filesystem::path& path);

McRequest parse_mc_spec(const nlohmann::json& doc);
McRequest load_mc_spec(const std::filesystem::path& path);

// Serializers. CSV uses the shortest round-trip decimal form, so re-running a
// command on identical inputs reproduces files byte for byte.
std::string chain_report_csv(const ChainNoiseReport& report,
                             const std::vector<double>& n_sigma_off_quanta);
nlohmann::json band_table_json(const BandAverageTable& table);
std::string band_table_csv(const BandAverageTable& table);

nlohmann::json shot_fit_json(const ShotFitResult& r, double frequency_hz);
std::string shot_fit_csv(const ShotFitResult& r, double frequency_hz);
std::string shot_fit_residuals_csv(const NoiseCurve& curve, double frequency_hz,
                                   const ShotFitResult& r);
nlohmann::json johnson_fit_json(const JohnsonFitResult& r, double frequency_hz);
std::string johnson_fit_csv(const JohnsonFitResult& r, double frequency_hz);
std::string johnson_fit_residuals_csv(const NoiseCurve& curve, double frequency_hz,
                                      const JohnsonFitResult& r);

std::string noise_rise_csv(const std::vector<double>& freq_hz, const std::vector<double>& r,
                           const std::vector<double>& gain_linear,
                           const std::vector<double>& n_sigma_off_quanta,
                           const std::vector<double>& n_sigma_quanta);
std::string gain_sweep_csv(const std::vector<std::pair<double, double>>& sweep);

nlohmann::json budget_report_json(const BudgetReport& rep);
std::string budget_inferred_csv(const BudgetReport& rep);

std::string pump_budget_csv(const PumpBudget& b);
nlohmann::json pump_budget_json(const PumpBudget& b);

// Writes via a temp file and rename, so failed commands leave no partial output.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace chainnoise::io
