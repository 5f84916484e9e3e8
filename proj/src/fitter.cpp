#include "chainnoise/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "chainnoise/errors.hpp"
#include "chainnoise/levmar.hpp"
#include "chainnoise/quanta.hpp"

namespace chainnoise {

double shot_asymptote_threshold_v(double f_hz) {
    // |eV / 2hf| > 3  <=>  |V| > 6 hf / e
    return 6.0 * constants::planck_h * f_hz / constants::electron_charge;
}

namespace {

struct LineFit {
    double slope, intercept;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericError("degenerate abscissa in linear fit");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

void require_volts(const NoiseCurve& curve, const char* op) {
    if (curve.x_kind != XKind::Volts) {
        throw ConfigError(std::string(op) + " requires a bias-voltage curve (x_kind=volts)");
    }
}

std::string short_volts(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g V", v);
    return buf;
}

}  // namespace

ShotStage1 fit_shot_stage1(const NoiseCurve& curve, double f_hz) {
    require_volts(curve, "shot-noise fit");
    Frequency f(f_hz);
    const double v_thr = shot_asymptote_threshold_v(f_hz);
    const double quanta_per_volt =
        constants::electron_charge / (2.0 * constants::planck_h * f_hz);

    std::vector<double> xp, yp, xn, yn;
    double v_max = 0.0;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        const double v = curve.x[i];
        if (v > v_thr) {
            xp.push_back(v * quanta_per_volt);
            yp.push_back(curve.y[i]);
        } else if (v < -v_thr) {
            xn.push_back(-v * quanta_per_volt);
            yn.push_back(curve.y[i]);
        }
        v_max = std::max(v_max, std::fabs(v));
    }
    if (xp.size() < 4 || xn.size() < 4) {
        throw NumericError(
            "shot-noise stage 1 needs >= 4 points with |eV/(2hf)| > 3 quanta on each branch "
            "(|V| > " + short_volts(v_thr) +
            "); got " + std::to_string(xp.size()) + " positive and " +
            std::to_string(xn.size()) + " negative");
    }

    const LineFit pos = least_squares_line(xp, yp);
    const LineFit neg = least_squares_line(xn, yn);
    if (pos.slope <= 0.0 || neg.slope <= 0.0) {
        throw NumericError("shot-noise stage 1 produced a non-positive gain slope");
    }

    ShotStage1 s;
    s.chain_gain = 0.5 * (pos.slope + neg.slope);
    s.n_sigma_off_quanta = 0.5 * (pos.intercept / pos.slope + neg.intercept / neg.slope);
    s.points_used_positive = static_cast<int>(xp.size());
    s.points_used_negative = static_cast<int>(xn.size());
    s.window_v = {v_thr, v_max};
    if (s.n_sigma_off_quanta <= 0.0) {
        throw NumericError("shot-noise stage 1 produced a non-positive off-state noise");
    }
    return s;
}

ShotFitResult fit_shot_stage2(const NoiseCurve& curve, double f_hz, const ShotStage1& stage1) {
    require_volts(curve, "shot-noise fit");
    Frequency f(f_hz);
    const double gain = stage1.chain_gain;

    Eigen::VectorXd p0(3), lo(3), hi(3);
    p0 << stage1.n_sigma_off_quanta, 0.1, 0.0;       // N_sigma_off, T, V_off
    lo << 0.75 * stage1.n_sigma_off_quanta, 1e-6, -std::numeric_limits<double>::infinity();
    hi << 1.25 * stage1.n_sigma_off_quanta, 1.0, std::numeric_limits<double>::infinity();

    const auto& xs = curve.x;
    const auto& ys = curve.y;
    const auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r,
                           Eigen::MatrixXd* jac) {
        const double s = p[0], t = p[1], voff = p[2];
        r.resize(static_cast<Eigen::Index>(xs.size()));
        if (jac) jac->resize(static_cast<Eigen::Index>(xs.size()), 3);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double v = xs[i] - voff;
            r[static_cast<Eigen::Index>(i)] =
                gain * (sntj_occupancy_raw(v, t, f_hz) + s) - ys[i];
            if (jac) {
                (*jac)(static_cast<Eigen::Index>(i), 0) = gain;
                (*jac)(static_cast<Eigen::Index>(i), 1) = gain * sntj_docc_dt(v, t, f_hz);
                (*jac)(static_cast<Eigen::Index>(i), 2) = -gain * sntj_docc_dv(v, t, f_hz);
            }
        }
    };

    const LmSummary lm = levenberg_marquardt_bounded(model, p0, lo, hi);
    if (!lm.converged) {
        throw NumericError("shot-noise stage 2 did not converge after " +
                           std::to_string(lm.iterations) +
                           " iterations (final cost " + std::to_string(lm.cost) + ")");
    }

    ShotFitResult out;
    out.chain_gain = gain;
    out.n_sigma_off_quanta = lm.params[0];
    out.source_temp_k = lm.params[1];
    out.v_offset_v = lm.params[2];
    out.residual_rms = lm.residual_rms;
    out.stage1_window_v = stage1.window_v;
    out.iterations = lm.iterations;
    out.converged = lm.converged;
    out.bound_active_n_sigma_off = lm.active_bounds[0] != 0;
    out.bound_active_temp = lm.active_bounds[1] != 0;
    out.final_cost = lm.cost;
    return out;
}

ShotFitResult fit_shot(const NoiseCurve& curve, double f_hz) {
    return fit_shot_stage2(curve, f_hz, fit_shot_stage1(curve, f_hz));
}

JohnsonFitResult fit_johnson(const NoiseCurve& curve, double f_hz) {
    if (curve.x_kind != XKind::Kelvin) {
        throw ConfigError("Johnson fit requires a temperature curve (x_kind=kelvin)");
    }
    Frequency f(f_hz);
    if (curve.x.size() < 3) {
        throw NumericError("Johnson fit needs >= 3 temperature points");
    }
    std::vector<double> n_in(curve.x.size());
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (curve.x[i] < 0.0) throw ConfigError("Johnson fit: temperatures must be >= 0 K");
        n_in[i] = johnson_occupancy_raw(curve.x[i], f_hz);
    }
    const auto [lo_it, hi_it] = std::minmax_element(n_in.begin(), n_in.end());
    if (*hi_it < 3.0 * *lo_it) {
        throw NumericError("Johnson fit: occupancy span must cover a factor >= 3 "
                           "(degenerate temperature range)");
    }

    // y = a n_in + b with a = gain, b = gain * n_sigma: linear and identifiable.
    const LineFit line = least_squares_line(n_in, curve.y);
    if (line.slope <= 0.0) throw NumericError("Johnson fit produced a non-positive gain");

    JohnsonFitResult out;
    out.chain_gain = line.slope;
    out.n_sigma_quanta = line.intercept / line.slope;
    double ss = 0.0;
    for (std::size_t i = 0; i < n_in.size(); ++i) {
        const double r = line.slope * n_in[i] + line.intercept - curve.y[i];
        ss += r * r;
    }
    out.residual_rms = std::sqrt(ss / static_cast<double>(n_in.size()));
    return out;
}

}  // namespace chainnoise
