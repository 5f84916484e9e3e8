#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainnoise/freq_profile.hpp"
#include "chainnoise/types.hpp"

namespace chainnoise {

enum class StageKind { Loss, ParametricAmp, Follower };

// How the idler-path quantities of the parametric amplifier are evaluated.
//   SameAsSignal:      idler efficiencies and bath occupancies taken at the
//                      signal frequency (default).
//   ExplicitProfile:   loss stages may carry a separate eta_idler profile,
//                      evaluated at the signal frequency.
//   AtIdlerFrequency:  efficiencies and bath occupancies evaluated at
//                      f_i = f_pump - f_signal (requires pump_freq).
enum class IdlerMode { SameAsSignal, ExplicitProfile, AtIdlerFrequency };

// One element of an amplification chain, in signal-propagation order.
//   Loss:          beamsplitter with transmission eta and a thermal bath.
//   ParametricAmp: 4-port signal/idler amplifier with optional excess noise
//                  (total, kelvin, split evenly between the signal-to-signal
//                  and idler-to-signal paths).
//   Follower:      phase-insensitive amplifier with added noise referred to
//                  its own input (kelvin, linear convention).
struct StageSpec {
    StageKind kind;
    std::string label;

    FreqProfile eta = FreqProfile::constant(1.0);  // Loss
    double bath_k = 0.0;                           // Loss
    std::optional<FreqProfile> eta_idler;          // Loss, ExplicitProfile mode

    FreqProfile gain_db = FreqProfile::constant(0.0);  // amplifiers
    double excess_k = 0.0;                             // ParametricAmp
    FreqProfile added_noise_k = FreqProfile::constant(0.0);  // Follower

    double stage_temp_k = 0.0;  // physical stage the element sits on

    static StageSpec loss(std::string label, FreqProfile eta, double bath_k);
    static StageSpec paramp(std::string label, FreqProfile gain_db, double excess_k = 0.0);
    static StageSpec follower(std::string label, FreqProfile gain_db, FreqProfile added_noise_k);
};

struct ChainConfig {
    std::vector<StageSpec> stages;
    std::vector<double> freq_grid_hz;
    IdlerMode idler_mode = IdlerMode::SameAsSignal;
    std::optional<double> pump_freq_hz;
    std::optional<std::pair<double, double>> band_hz;  // band-average window

    void validate() const;       // throws std::invalid_argument
    int paramp_index() const;    // -1 when absent
};

// g n_s + (g - 1) n_i: mean signal output of a phase-insensitive 4-port amplifier.
Occupancy paramp_output(Occupancy n_sig, Occupancy n_idl, GainLinear g);

// eta n_in + (1 - eta) n_bath: beamsplitter mixing with a thermal bath.
Occupancy loss_stage(Occupancy n_in, Efficiency eta, Occupancy n_bath);

struct StageTrace {
    std::string label;
    double occupancy_quanta;  // signal occupancy at the stage output
};

// Full stage-by-stage propagation, keeping the exact (g - 1) idler weight.
struct ExactPropagation {
    std::vector<double> freq_hz;
    std::vector<double> output_quanta;                  // occupancy at the chain output
    std::vector<double> idler_input_quanta;             // idler occupancy entering the amp
    std::vector<double> total_transfer;                 // product of eta and gains
    std::vector<double> input_referred_added_quanta;    // output/transfer - n_in
    std::vector<std::vector<StageTrace>> stage_outputs; // per frequency
};
ExactPropagation propagate_exact(const ChainConfig& cfg, Occupancy n_in_signal);

struct StageNoiseRow {
    std::string label;
    StageKind kind;
    std::vector<double> intrinsic_quanta;        // at the stage's own input plane
    std::vector<double> input_referred_quanta;   // referred to the chain input
};

// High-gain chain-added noise with per-stage attribution. The per-stage
// input-referred terms sum to n_sigma exactly by construction.
struct ChainNoiseReport {
    std::vector<double> freq_hz;
    std::vector<double> n_sigma_quanta;
    std::vector<double> t_sigma_k;
    std::vector<double> chain_gain_linear;
    std::vector<StageNoiseRow> stages;
    bool low_gain_flag = false;  // amp gain < 10 somewhere on the grid
};
ChainNoiseReport chain_added_noise(const ChainConfig& cfg);

// Added noise with the parametric amplifier off (passive, gain 1): no idler
// terms, no excess noise. Returned in quanta per grid frequency.
std::vector<double> chain_added_noise_off(const ChainConfig& cfg);

// Same, with per-stage attribution in the ChainNoiseReport shape (an amp
// stage contributes nothing and a zero row).
ChainNoiseReport chain_added_noise_off_report(const ChainConfig& cfg);

// Signal transfer of the off-state chain (eta and follower gains only).
std::vector<double> off_state_transfer(const ChainConfig& cfg);

// r = g (n_sigma + 1/2) / (n_sigma_off + 1/2) and its inverse.
double noise_rise(Occupancy n_sigma, Occupancy n_sigma_off, GainLinear g);
Occupancy noise_from_rise(double r, GainLinear g, Occupancy n_sigma_off);

// Band-averaged T_sigma as a function of amplifier gain; the sweep replaces
// the amp's gain profile with each listed linear gain.
std::vector<std::pair<double, double>> gain_sweep(const ChainConfig& cfg,
                                                  const std::vector<double>& gains_linear);
// Same, evaluated at a single frequency instead of the band average.
std::vector<std::pair<double, double>> gain_sweep_at(const ChainConfig& cfg,
                                                     const std::vector<double>& gains_linear,
                                                     double f_hz);

// Arithmetic band averages over the grid points inside [lo, hi].
struct BandRow {
    std::string label;
    StageKind kind;
    std::optional<double> transmission_efficiency;  // loss stages
    std::optional<double> insertion_loss_db;
    double intrinsic_k = 0.0;
    double input_referred_k = 0.0;
};
struct BandAverageTable {
    double lo_hz = 0.0, hi_hz = 0.0;
    double t_sigma_k = 0.0;
    double n_sigma_quanta = 0.0;
    double chain_gain_db = 0.0;
    bool low_gain_flag = false;
    std::vector<BandRow> rows;
};
BandAverageTable band_average(const ChainNoiseReport& report, const ChainConfig& cfg,
                              double lo_hz, double hi_hz);

}  // namespace chainnoise
