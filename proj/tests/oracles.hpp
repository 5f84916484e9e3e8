#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check: occupancies via the Bose form instead of coth/tanh, the
// cascade formulas written out as closed-form term sums, and a literal
// stage-by-stage walk of the canonical chain.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline constexpr double h = 6.62607015e-34;
inline constexpr double kb = 1.380649e-23;
inline constexpr double qe = 1.602176634e-19;

// Bose-Einstein occupation plus vacuum: 1/(e^{hf/kT} - 1) + 1/2. Algebraically
// equal to (1/2) coth(hf/2kT) but computed through a different route.
inline double thermal_occ(double t_k, double f_hz) {
    if (t_k == 0.0) return 0.5;
    return 1.0 / std::expm1(h * f_hz / (kb * t_k)) + 0.5;
}

inline double occ_to_kelvin(double n, double f_hz) { return n * h * f_hz / kb; }
inline double kelvin_to_occ(double t, double f_hz) { return t * kb / (h * f_hz); }

// coth via exponentials.
inline double coth(double x) {
    const double e2 = std::exp(-2.0 * std::fabs(x));
    const double c = (1.0 + e2) / (1.0 - e2);
    return x < 0.0 ? -c : c;
}

// Biased-junction occupancy, written directly from the two-branch form.
inline double sntj_occ(double v, double t_k, double f_hz) {
    const double hf = h * f_hz;
    const double ev = qe * v;
    if (t_k == 0.0) return (std::fabs(ev + hf) + std::fabs(ev - hf)) / (4.0 * hf);
    const double a = (ev + hf) / (2.0 * kb * t_k);
    const double b = (ev - hf) / (2.0 * kb * t_k);
    const double ga = (a == 0.0) ? 1.0 : a * coth(a);
    const double gb = (b == 0.0) ? 1.0 : b * coth(b);
    return (kb * t_k / (2.0 * hf)) * (ga + gb);
}

// High-gain chain-added noise of the canonical chain, as the five-term sum.
// n_cold is the cold-stage bath occupancy (vacuum when the bath is at 0 K).
struct CanonicalRows {
    double cold, warm, amp, output, follower;
    double sum() const { return cold + warm + amp + output + follower; }
};
inline CanonicalRows chain_rows(double e1c, double e1h, double e2, double g, double n_cold,
                                double n_h, double n_ex, double n_follow) {
    CanonicalRows r;
    r.cold = 2.0 * (1.0 - e1c) / e1c * n_cold + 0.5;
    r.warm = 2.0 * (1.0 - e1h) / (e1h * e1c) * n_h;
    r.amp = n_ex / (e1h * e1c);
    r.output = (1.0 - e2) / (e2 * g * e1h * e1c) * n_h;
    r.follower = n_follow / (e2 * g * e1h * e1c);
    return r;
}

// Off-state added noise of the canonical chain (amp passive at gain 1).
inline double off_state(double e1c, double e1h, double e2, double n_cold, double n_h,
                        double n_follow) {
    return (1.0 - e1c) / e1c * n_cold + (1.0 - e1h) / (e1h * e1c) * n_h +
           (1.0 - e2) / (e2 * e1h * e1c) * n_h + n_follow / (e2 * e1h * e1c);
}

// Literal stage-by-stage walk of the canonical chain with the exact (g - 1)
// idler weight. Returns the intermediates in propagation order.
struct ExactWalk {
    double n_1c, n_1h, n_1h_idler, n_2, n_3, n_4;
};
inline ExactWalk exact_walk(double n_in, double e1c, double e1h, double e2, double g,
                            double g_follow, double n_cold, double n_h, double n_ex_s,
                            double n_ex_i, double n_follow) {
    ExactWalk w;
    w.n_1c = e1c * n_in + (1.0 - e1c) * n_cold;
    w.n_1h = e1h * w.n_1c + (1.0 - e1h) * n_h;
    w.n_1h_idler = e1h * 0.5 + (1.0 - e1h) * n_h;
    w.n_2 = g * (w.n_1h + n_ex_s) + (g - 1.0) * (w.n_1h_idler + n_ex_i);
    w.n_3 = e2 * w.n_2 + (1.0 - e2) * n_h;
    w.n_4 = g_follow * (w.n_3 + n_follow);
    return w;
}

// Deterministic uniform generator for randomized property tests.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    double uniform() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace oracle
