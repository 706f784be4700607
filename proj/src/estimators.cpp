#include "beran/estimators.hpp"

#include "beran/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace beran {

namespace {

constexpr double kMassFloor = 1e-12;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorKind::invalid_input, std::string(what) + " must be a positive finite number");
}

} // namespace

SortedSample::SortedSample(const SurvivalSample& sample) {
    const std::size_t n = sample.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const auto z = sample.z();
    const auto d = sample.delta();
    const auto x = sample.x();
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        if (z[a] != z[b]) return z[a] < z[b];
        if (d[a] != d[b]) return d[a] > d[b];
        return x[a] < x[b];
    });
    x_.resize(n);
    z_.resize(n);
    delta_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x_[i] = x[order_[i]];
        z_[i] = z[order_[i]];
        delta_[i] = d[order_[i]];
        if (i == 0 || z_[i] != z_[i - 1]) {
            group_time_.push_back(z_[i]);
            group_start_.push_back(i);
        }
    }
    group_start_.push_back(n);
}

bool sorted_beran_weights(const SortedSample& sorted, double x0, double h, const KernelSpec& kernel,
                          std::span<double> weights) {
    const auto x = sorted.x();
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        weights[i] = covariate_kernel(kernel, x0, x[i], h);
        total += weights[i];
    }
    if (!(total > 0.0)) return false;
    for (auto& w : weights) w /= total;
    return true;
}

void product_limit(const SortedSample& sorted, std::span<const double> weights, bool censoring_events,
                   std::span<double> group_survival) {
    const auto delta = sorted.delta();
    const auto starts = sorted.group_starts();
    const int event_flag = censoring_events ? 0 : 1;
    // At-risk mass as a tail sum, which equals 1 - sum_{Z_j < Z_i} w_j
    // without the cancellation.
    double at_risk = 0.0;
    std::vector<double> tail(sorted.groups());
    for (std::size_t g = sorted.groups(); g-- > 0;) {
        for (std::size_t i = starts[g]; i < starts[g + 1]; ++i) at_risk += weights[i];
        tail[g] = at_risk;
    }
    double surv = 1.0;
    for (std::size_t g = 0; g < sorted.groups(); ++g) {
        double events = 0.0;
        for (std::size_t i = starts[g]; i < starts[g + 1]; ++i)
            if (delta[i] == event_flag) events += weights[i];
        double factor;
        if (tail[g] <= kMassFloor)
            factor = events <= kMassFloor ? 1.0 : 0.0;
        else
            factor = std::clamp(1.0 - events / tail[g], 0.0, 1.0);
        surv *= factor;
        group_survival[g] = surv;
    }
}

CurveEvaluator::CurveEvaluator(const SortedSample& sorted, const KernelSpec& kernel)
    : sorted_(&sorted), kernel_(kernel), integrated_(kernel), weights_(sorted.size()),
      group_survival_(sorted.groups()) {}

void CurveEvaluator::step_on_grid(const TimeGrid& grid, std::span<double> out) const {
    const auto times = sorted_->group_times();
    std::size_t g = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        while (g < times.size() && times[g] <= grid[k]) ++g;
        out[k] = g == 0 ? 1.0 : group_survival_[g - 1];
    }
}

void CurveEvaluator::smooth_on_grid(double g, const TimeGrid& grid, std::span<double> out) {
    const auto times = sorted_->group_times();
    jumps_.clear();
    jump_times_.clear();
    double prev = 1.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double s = prev - group_survival_[j];
        prev = group_survival_[j];
        if (s > 0.0) {
            jumps_.push_back(s);
            jump_times_.push_back(times[j]);
        }
    }
    jump_prefix_.resize(jumps_.size() + 1);
    jump_prefix_[0] = 0.0;
    for (std::size_t m = 0; m < jumps_.size(); ++m) jump_prefix_[m + 1] = jump_prefix_[m] + jumps_[m];

    // Jumps far enough left of t contribute their full mass and jumps far
    // enough right contribute nothing; only the window in between needs the
    // integrated kernel. Summation order matches a plain loop over all jumps.
    const double sat_hi = integrated_.saturated_high();
    const double sat_lo = integrated_.saturated_low();
    std::size_t lo = 0, hi = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        while (lo < jumps_.size() && (t - jump_times_[lo]) / g >= sat_hi) ++lo;
        if (hi < lo) hi = lo;
        while (hi < jumps_.size() && (t - jump_times_[hi]) / g > sat_lo) ++hi;
        double acc = jump_prefix_[lo];
        for (std::size_t m = lo; m < hi; ++m) acc += jumps_[m] * integrated_((t - jump_times_[m]) / g);
        out[k] = std::clamp(1.0 - acc, 0.0, 1.0);
    }
}

bool CurveEvaluator::beran(double x0, double h, const TimeGrid& grid, std::span<double> out) {
    if (!sorted_beran_weights(*sorted_, x0, h, kernel_, weights_)) return false;
    product_limit(*sorted_, weights_, false, group_survival_);
    step_on_grid(grid, out);
    return true;
}

bool CurveEvaluator::smoothed(double x0, double h, double g, const TimeGrid& grid, std::span<double> out) {
    if (!sorted_beran_weights(*sorted_, x0, h, kernel_, weights_)) return false;
    product_limit(*sorted_, weights_, false, group_survival_);
    smooth_on_grid(g, grid, out);
    return true;
}

void CurveEvaluator::kaplan_meier(const TimeGrid& grid, std::span<double> out) {
    std::fill(weights_.begin(), weights_.end(), 1.0 / static_cast<double>(weights_.size()));
    product_limit(*sorted_, weights_, false, group_survival_);
    step_on_grid(grid, out);
}

bool CurveEvaluator::evaluate(Estimator estimator, double x0, const Bandwidths& bw, const TimeGrid& grid,
                              std::span<double> out) {
    switch (estimator) {
    case Estimator::beran: return beran(x0, bw.h, grid, out);
    case Estimator::smoothed_beran: return smoothed(x0, bw.h, bw.g.value(), grid, out);
    case Estimator::kaplan_meier: kaplan_meier(grid, out); return true;
    }
    return false;
}

BeranWeights beran_weights(const SurvivalSample& sample, double x0, double h, const KernelSpec& kernel) {
    require_positive(h, "bandwidth h");
    kernel.validate();
    const SortedSample sorted(sample);
    std::vector<double> w(sample.size());
    if (!sorted_beran_weights(sorted, x0, h, kernel, w))
        throw Error(ErrorKind::degenerate_weights, "all kernel weights are zero at x0 = " + std::to_string(x0));
    BeranWeights out{std::vector<double>(sample.size()), x0, h};
    const auto order = sorted.order();
    for (std::size_t i = 0; i < w.size(); ++i) out.w[order[i]] = w[i];
    return out;
}

SurvivalCurve estimate_curve(const SurvivalSample& sample, Estimator estimator, double x0, const Bandwidths& bw,
                             const TimeGrid& grid, const KernelSpec& kernel) {
    kernel.validate();
    if (estimator != Estimator::kaplan_meier) require_positive(bw.h, "bandwidth h");
    if (estimator == Estimator::smoothed_beran) {
        if (!bw.g) throw Error(ErrorKind::invalid_input, "smoothed estimator needs a time bandwidth g");
        require_positive(*bw.g, "bandwidth g");
    }
    const SortedSample sorted(sample);
    CurveEvaluator eval(sorted, kernel);
    SurvivalCurve curve{grid, std::vector<double>(grid.size()), estimator, x0, bw};
    if (estimator == Estimator::kaplan_meier) curve.bandwidths = {};
    if (!eval.evaluate(estimator, x0, bw, grid, curve.values))
        throw Error(ErrorKind::degenerate_weights, "all kernel weights are zero at x0 = " + std::to_string(x0));
    return curve;
}

SurvivalCurve beran_survival(const SurvivalSample& sample, double x0, double h, const TimeGrid& grid,
                             const KernelSpec& kernel) {
    return estimate_curve(sample, Estimator::beran, x0, Bandwidths{h, std::nullopt}, grid, kernel);
}

SurvivalCurve kaplan_meier(const SurvivalSample& sample, const TimeGrid& grid) {
    return estimate_curve(sample, Estimator::kaplan_meier, 0.0, Bandwidths{}, grid, KernelSpec{});
}

SurvivalCurve smoothed_beran_survival(const SurvivalSample& sample, double x0, double h, double g,
                                      const TimeGrid& grid, const KernelSpec& kernel) {
    return estimate_curve(sample, Estimator::smoothed_beran, x0, Bandwidths{h, g}, grid, kernel);
}

} // namespace beran
