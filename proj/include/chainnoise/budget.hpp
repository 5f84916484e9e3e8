#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainnoise/chain.hpp"
#include "chainnoise/types.hpp"

namespace chainnoise {

// Ratio of chain gains measured against the biased-junction and the
// variable-temperature reference planes. A ratio above unity is unphysical
// and reported flagged rather than clipped.
struct PackagingEfficiency {
    double eta = 1.0;
    bool flagged_above_unity = false;
};
PackagingEfficiency infer_packaging_efficiency(double gain_sntj, double gain_vts);

// A packaging transmission measured as one number, divided evenly in dB
// across n_ways stages (each share is the n-th root of the total).
double split_transmission_equal_db(double eta_total, int n_ways = 2);

// Single-frequency inversion of the off-state added noise for the canonical
// [loss, loss, (amp), loss, follower] chain:
//   N_H = e2 e1h e1c N' - e2 e1h (1-e1c) N_cold - e2 (1-e1h) N_h - (1-e2) N_h.
double infer_follower_noise_quanta(double n_sigma_off_quanta, double eta_1c, double eta_1h,
                                   double eta_2, double n_bath_quanta,
                                   double n_cold_quanta = 0.5);

// Chain-driven inversions: subtract the chain's own forward model from the
// measured noise and refer the remainder to the relevant stage. Negative
// results signal inconsistent calibration inputs and raise NumericError.
std::vector<double> infer_follower_noise_k(const ChainConfig& chain,
                                           const std::vector<double>& n_sigma_off_quanta);
std::vector<double> infer_excess_noise_k(const ChainConfig& chain,
                                         const std::vector<double>& t_sigma_k);

// Added noise in kelvin: amp chains use the on-state model, follower-only
// chains the off-state model.
std::vector<double> predict_chain_noise_k(const ChainConfig& chain);

// Monte Carlo propagation of parameter uncertainties.
// Prior targets:
//   "stage:<label>:eta"            additive, profile truncated to (0, 1]
//   "stage:<label>:gain_db"        additive in dB
//   "stage:<label>:bath_k"         additive, truncated to >= 0
//   "stage:<label>:added_noise_k"  additive, truncated to >= 0
//   "stage:<label>:excess_k"       additive, truncated to >= 0
//   "output_power_db"              output power calibration; rescales the
//                                  output-referred noise (n + 1/2) by 10^(d/10)
struct McPrior {
    std::string target;
    double sigma = 0.0;
};
struct McRequest {
    std::vector<McPrior> priors;
    int n_samples = 1000;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> measured_n_sigma_off_quanta;  // enables T_H stats
    std::optional<std::vector<double>> measured_t_sigma_k;           // enables T_ex stats
};
struct McStats {
    std::vector<double> mean, stddev;
};
struct McResult {
    std::vector<double> freq_hz;
    McStats t_sigma_k;       // on-state (amp chains) or off-state noise in kelvin
    McStats t_sigma_off_k;
    std::optional<McStats> t_h_k;
    std::optional<McStats> t_ex_k;
};
McResult mc_uncertainty(const ChainConfig& chain, const McRequest& request);

struct DcPower {
    double power_w = 0.0;
    double resistance_ohm = 0.0;
};
DcPower dc_power(double v_volts, double i_amps);

// Pump-power dissipation along a delivery path, listed source to device.
// Attenuators dissipate at their own stage; a directional coupler routes the
// through-port remainder into its termination stage.
struct PumpPathElement {
    enum class Kind { Attenuator, Coupler };
    Kind kind = Kind::Attenuator;
    std::string label;
    double db = 0.0;                  // attenuation or coupling
    double stage_temp_k = 0.0;
    double termination_temp_k = 0.0;  // couplers only
};
struct PowerEntry {
    std::string label;
    double stage_temp_k = 0.0;
    double dissipated_w = 0.0;
};
struct PumpBudget {
    double delivered_w = 0.0;  // at the device
    double input_w = 0.0;      // entering the path
    std::vector<PowerEntry> entries;
    std::vector<std::pair<double, double>> totals_by_stage;  // (stage_temp_k, watts)
};
PumpBudget pump_dissipation(PowerDbm delivered,
                            const std::vector<PumpPathElement>& path);

struct BudgetReport {
    std::optional<PackagingEfficiency> eta_p;
    std::vector<double> freq_hz;
    std::optional<std::vector<double>> t_h_k;
    std::optional<std::vector<double>> t_ex_k;
    std::optional<BandAverageTable> table;
    std::vector<PowerEntry> power_entries;
    std::optional<DcPower> dc;
    std::optional<McResult> mc;
};

}  // namespace chainnoise
