#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beran {

struct Interval {
    double low = 0.0;
    double high = 0.0;

    double width() const noexcept { return high - low; }
    bool contains(double v) const noexcept { return v >= low && v <= high; }
    double clamp(double v) const noexcept { return v < low ? low : (v > high ? high : v); }
};

/// Right-censored sample of (covariate, observed time, uncensoring indicator)
/// triples. Validated on construction: equal lengths, n >= 1, finite covariates,
/// finite nonnegative times and indicators in {0, 1}.
class SurvivalSample {
public:
    SurvivalSample() = default;
    SurvivalSample(std::vector<double> x, std::vector<double> z, std::vector<int> delta);

    std::size_t size() const noexcept { return z_.size(); }
    bool empty() const noexcept { return z_.empty(); }

    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> z() const noexcept { return z_; }
    std::span<const int> delta() const noexcept { return delta_; }

    std::size_t events() const noexcept;
    double censoring_fraction() const noexcept;

    /// Rows picked by index, in the given order.
    SurvivalSample subset(std::span<const std::size_t> rows) const;

    friend bool operator==(const SurvivalSample&, const SurvivalSample&) = default;

private:
    std::vector<double> x_;
    std::vector<double> z_;
    std::vector<int> delta_;
};

/// Evaluation grid 0 < t_1 < ... < t_nT covering I_T = (0, t_nT].
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> points);

    /// t_k = k * t_max / n for k = 1..n.
    static TimeGrid uniform(double t_max, std::size_t n);

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const double> points() const noexcept { return points_; }
    double operator[](std::size_t k) const { return points_[k]; }
    double t_max() const { return points_.back(); }

    /// Width of cell k, (t_{k-1}, t_k] with t_0 = 0.
    std::span<const double> cell_widths() const noexcept { return widths_; }

    /// Riemann sum of f over I_T with one node per cell.
    double integrate(std::span<const double> values) const;

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.points_ == b.points_; }

private:
    std::vector<double> points_;
    std::vector<double> widths_;
};

enum class Estimator { beran, smoothed_beran, kaplan_meier };

const char* to_string(Estimator e) noexcept;
Estimator parse_estimator(const std::string& name);

/// Covariate bandwidth h and, for the smoothed estimator, the time bandwidth g.
struct Bandwidths {
    double h = 0.0;
    std::optional<double> g;
};

struct SurvivalCurve {
    TimeGrid grid;
    std::vector<double> values;
    Estimator estimator = Estimator::beran;
    double x0 = 0.0;
    Bandwidths bandwidths;
};

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7).
double quantile(std::span<const double> values, double p);

} // namespace beran
