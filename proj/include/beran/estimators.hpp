#pragma once

#include "beran/kernel.hpp"
#include "beran/sample.hpp"

#include <span>
#include <vector>

namespace beran {

/// Nadaraya-Watson weights w_i(x0) = K((x0 - X_i)/h) / sum_j K((x0 - X_j)/h),
/// reported in input order.
struct BeranWeights {
    std::vector<double> w;
    double x0 = 0.0;
    double h = 0.0;
};

/// Sample in product-limit order: ascending time, events before censorings at
/// equal times, then ascending covariate. Equal times form one group.
class SortedSample {
public:
    SortedSample() = default;
    explicit SortedSample(const SurvivalSample& sample);

    std::size_t size() const noexcept { return z_.size(); }
    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> z() const noexcept { return z_; }
    std::span<const int> delta() const noexcept { return delta_; }
    /// Position in the original sample of each sorted row.
    std::span<const std::size_t> order() const noexcept { return order_; }

    std::size_t groups() const noexcept { return group_time_.size(); }
    std::span<const double> group_times() const noexcept { return group_time_; }
    /// Row range of group g is [group_start[g], group_start[g + 1]).
    std::span<const std::size_t> group_starts() const noexcept { return group_start_; }

private:
    std::vector<double> x_;
    std::vector<double> z_;
    std::vector<int> delta_;
    std::vector<std::size_t> order_;
    std::vector<double> group_time_;
    std::vector<std::size_t> group_start_;
};

/// Kernel weights in sorted order. Returns false when every kernel value is
/// zero (x0 too far from the data at bandwidth h).
bool sorted_beran_weights(const SortedSample& sorted, double x0, double h, const KernelSpec& kernel,
                          std::span<double> weights);

/// Weighted product-limit survival right after each time group.
/// `censoring_events` swaps the roles of delta = 1 and delta = 0, giving the
/// censoring-time survival function.
void product_limit(const SortedSample& sorted, std::span<const double> weights, bool censoring_events,
                   std::span<double> group_survival);

/// Reusable evaluator over one sorted sample. Holds scratch space, so one
/// instance per thread.
class CurveEvaluator {
public:
    CurveEvaluator(const SortedSample& sorted, const KernelSpec& kernel);

    /// Beran curve on the grid. False on degenerate weights.
    bool beran(double x0, double h, const TimeGrid& grid, std::span<double> out);
    /// Smoothed Beran curve on the grid. False on degenerate weights.
    bool smoothed(double x0, double h, double g, const TimeGrid& grid, std::span<double> out);
    /// Uniform-weight product-limit curve.
    void kaplan_meier(const TimeGrid& grid, std::span<double> out);

    bool evaluate(Estimator estimator, double x0, const Bandwidths& bw, const TimeGrid& grid,
                  std::span<double> out);

    /// Survival after each time group from the last successful beran()/smoothed() call.
    std::span<const double> group_survival() const noexcept { return group_survival_; }

private:
    void step_on_grid(const TimeGrid& grid, std::span<double> out) const;
    void smooth_on_grid(double g, const TimeGrid& grid, std::span<double> out);

    const SortedSample* sorted_;
    KernelSpec kernel_;
    IntegratedKernel integrated_;
    std::vector<double> weights_;
    std::vector<double> group_survival_;
    std::vector<double> jumps_;
    std::vector<double> jump_times_;
    std::vector<double> jump_prefix_;
};

BeranWeights beran_weights(const SurvivalSample& sample, double x0, double h, const KernelSpec& kernel);

SurvivalCurve beran_survival(const SurvivalSample& sample, double x0, double h, const TimeGrid& grid,
                             const KernelSpec& kernel);

SurvivalCurve kaplan_meier(const SurvivalSample& sample, const TimeGrid& grid);

SurvivalCurve smoothed_beran_survival(const SurvivalSample& sample, double x0, double h, double g,
                                      const TimeGrid& grid, const KernelSpec& kernel);

/// Dispatches on the estimator; g is required for the smoothed estimator.
SurvivalCurve estimate_curve(const SurvivalSample& sample, Estimator estimator, double x0, const Bandwidths& bw,
                             const TimeGrid& grid, const KernelSpec& kernel);

} // namespace beran
