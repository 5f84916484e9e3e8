#pragma once

#include <utility>
#include <vector>

#include "chainnoise/sources.hpp"

namespace chainnoise {

// Asymptotic (shot-noise-dominated) fit: straight line through the points
// with |eV / 2hf| > 3 quanta, each branch fit separately and averaged.
struct ShotStage1 {
    double chain_gain = 0.0;
    double n_sigma_off_quanta = 0.0;
    int points_used_positive = 0;
    int points_used_negative = 0;
    std::pair<double, double> window_v{0.0, 0.0};  // |V| range used
};

struct ShotFitResult {
    double chain_gain = 0.0;          // from stage 1, frozen in stage 2
    double n_sigma_off_quanta = 0.0;  // stage-2 refined
    double source_temp_k = 0.0;
    double v_offset_v = 0.0;
    double residual_rms = 0.0;
    std::pair<double, double> stage1_window_v{0.0, 0.0};
    int iterations = 0;
    bool converged = false;
    bool bound_active_n_sigma_off = false;
    bool bound_active_temp = false;
    double final_cost = 0.0;
};

struct JohnsonFitResult {
    double chain_gain = 0.0;
    double n_sigma_quanta = 0.0;
    double residual_rms = 0.0;
};

// |V| above which a bias point counts as asymptotic: |eV / 2hf| > 3 quanta.
double shot_asymptote_threshold_v(double f_hz);

ShotStage1 fit_shot_stage1(const NoiseCurve& curve, double f_hz);

// Bounded nonlinear fit of y = G_c (N_in(V - V_off, T) + N_sigma_off) over the
// full curve with G_c frozen. N_sigma_off is held within +-25% of the stage-1
// estimate and T below 1 K.
ShotFitResult fit_shot_stage2(const NoiseCurve& curve, double f_hz, const ShotStage1& stage1);

ShotFitResult fit_shot(const NoiseCurve& curve, double f_hz);

// Linear fit of y = G (N_thermal(T) + N_sigma) over VTS temperature points.
JohnsonFitResult fit_johnson(const NoiseCurve& curve, double f_hz);

}  // namespace chainnoise
