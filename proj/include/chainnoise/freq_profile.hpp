#pragma once

#include <utility>
#include <vector>

namespace chainnoise {

// A scalar stage parameter that may vary with frequency. Tabulated profiles
// are piecewise-linear in frequency and clamp to the end values outside the
// tabulated range (measured curves arrive as sampled data).
class FreqProfile {
  public:
    static FreqProfile constant(double value);
    // points: (frequency_hz, value), frequencies strictly increasing.
    static FreqProfile table(std::vector<std::pair<double, double>> points);

    double operator()(double f_hz) const;

    bool is_constant() const { return pts_.size() == 1; }
    double min_value() const;
    double max_value() const;

    // Same profile with `delta` added to every tabulated value.
    FreqProfile shifted(double delta) const;

  private:
    explicit FreqProfile(std::vector<std::pair<double, double>> pts) : pts_(std::move(pts)) {}
    std::vector<std::pair<double, double>> pts_;
};

}  // namespace chainnoise
