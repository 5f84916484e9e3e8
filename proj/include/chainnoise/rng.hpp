#pragma once

#include <cmath>
#include <cstdint>

namespace chainnoise::rng {

// splitmix64: used both as a seed mixer and as the raw bit stream behind the
// Gaussian generator, so that seeded outputs are identical across platforms
// and standard-library implementations.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic per-sample seed for parallel-safe Monte Carlo splitting:
// the sample index is mixed into the base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base ^ (0xD1B54A32D192ED03ULL * (index + 1));
    return splitmix64(s);
}

// Standard normal stream via Box-Muller on 53-bit uniforms.
class Gaussian {
  public:
    explicit Gaussian(std::uint64_t seed) : state_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    double uniform01() {
        return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace chainnoise::rng
