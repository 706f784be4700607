#include "beran/sample.hpp"

#include "beran/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beran {

SurvivalSample::SurvivalSample(std::vector<double> x, std::vector<double> z, std::vector<int> delta)
    : x_(std::move(x)), z_(std::move(z)), delta_(std::move(delta)) {
    if (x_.size() != z_.size() || z_.size() != delta_.size())
        throw Error(ErrorKind::invalid_input, "sample columns have different lengths");
    if (z_.empty()) throw Error(ErrorKind::empty_dataset, "sample is empty");
    for (std::size_t i = 0; i < z_.size(); ++i) {
        if (!std::isfinite(x_[i]))
            throw Error(ErrorKind::invalid_input, "non-finite covariate at row " + std::to_string(i));
        if (!std::isfinite(z_[i]) || z_[i] < 0.0)
            throw Error(ErrorKind::invalid_input, "time must be finite and >= 0 at row " + std::to_string(i));
        if (delta_[i] != 0 && delta_[i] != 1)
            throw Error(ErrorKind::invalid_input, "status must be 0 or 1 at row " + std::to_string(i));
    }
}

std::size_t SurvivalSample::events() const noexcept {
    return static_cast<std::size_t>(std::count(delta_.begin(), delta_.end(), 1));
}

double SurvivalSample::censoring_fraction() const noexcept {
    if (empty()) return 0.0;
    return 1.0 - static_cast<double>(events()) / static_cast<double>(size());
}

SurvivalSample SurvivalSample::subset(std::span<const std::size_t> rows) const {
    std::vector<double> x, z;
    std::vector<int> d;
    x.reserve(rows.size());
    z.reserve(rows.size());
    d.reserve(rows.size());
    for (std::size_t r : rows) {
        x.push_back(x_.at(r));
        z.push_back(z_.at(r));
        d.push_back(delta_.at(r));
    }
    return SurvivalSample(std::move(x), std::move(z), std::move(d));
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw Error(ErrorKind::invalid_input, "time grid needs at least 2 points");
    double prev = 0.0;
    widths_.resize(points_.size());
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const double t = points_[k];
        if (!std::isfinite(t) || t <= prev)
            throw Error(ErrorKind::invalid_input, "time grid must be finite, positive and strictly increasing");
        widths_[k] = t - prev;
        prev = t;
    }
}

TimeGrid TimeGrid::uniform(double t_max, std::size_t n) {
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw Error(ErrorKind::invalid_input, "grid upper end must be positive");
    std::vector<double> pts(n);
    for (std::size_t k = 0; k < n; ++k)
        pts[k] = t_max * static_cast<double>(k + 1) / static_cast<double>(n);
    pts.back() = t_max;
    return TimeGrid(std::move(pts));
}

double TimeGrid::integrate(std::span<const double> values) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < widths_.size(); ++k) acc += widths_[k] * values[k];
    return acc;
}

const char* to_string(Estimator e) noexcept {
    switch (e) {
    case Estimator::beran: return "beran";
    case Estimator::smoothed_beran: return "smoothed-beran";
    case Estimator::kaplan_meier: return "kaplan-meier";
    }
    return "unknown";
}

Estimator parse_estimator(const std::string& name) {
    if (name == "beran") return Estimator::beran;
    if (name == "smoothed-beran") return Estimator::smoothed_beran;
    if (name == "kaplan-meier") return Estimator::kaplan_meier;
    throw Error(ErrorKind::invalid_input, "unknown estimator '" + name + "'");
}

double quantile(std::span<const double> values, double p) {
    if (values.empty()) throw Error(ErrorKind::empty_dataset, "quantile of an empty set");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_input, "quantile level outside [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace beran
