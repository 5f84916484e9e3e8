#include "chainnoise/freq_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainnoise {

FreqProfile FreqProfile::constant(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("profile value must be finite");
    return FreqProfile({{0.0, value}});
}

FreqProfile FreqProfile::table(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("profile table must be non-empty");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second)) {
            throw std::invalid_argument("profile table entries must be finite");
        }
        if (points[i].first <= 0.0) {
            throw std::invalid_argument("profile table frequencies must be > 0 Hz");
        }
        if (i > 0 && points[i].first <= points[i - 1].first) {
            throw std::invalid_argument("profile table frequencies must be strictly increasing");
        }
    }
    return FreqProfile(std::move(points));
}

double FreqProfile::operator()(double f_hz) const {
    if (pts_.size() == 1) return pts_.front().second;
    if (f_hz <= pts_.front().first) return pts_.front().second;
    if (f_hz >= pts_.back().first) return pts_.back().second;
    auto hi = std::upper_bound(pts_.begin(), pts_.end(), f_hz,
                               [](double f, const auto& p) { return f < p.first; });
    auto lo = hi - 1;
    const double t = (f_hz - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double FreqProfile::min_value() const {
    double m = pts_.front().second;
    for (const auto& p : pts_) m = std::min(m, p.second);
    return m;
}

double FreqProfile::max_value() const {
    double m = pts_.front().second;
    for (const auto& p : pts_) m = std::max(m, p.second);
    return m;
}

FreqProfile FreqProfile::shifted(double delta) const {
    std::vector<std::pair<double, double>> pts = pts_;
    for (auto& p : pts) p.second += delta;
    return FreqProfile(std::move(pts));
}

}  // namespace chainnoise
