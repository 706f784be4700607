#pragma once

#include "beran/estimators.hpp"
#include "beran/kernel.hpp"
#include "beran/optimizer.hpp"
#include "beran/parallel.hpp"
#include "beran/resampling.hpp"
#include "beran/sample.hpp"

#include <optional>
#include <vector>

namespace beran {

/// Q(0.975) - Q(0.025) with type-7 sample quantiles.
double central_spread(std::span<const double> values);

/// r = c * spread(X) / 2 * (sum delta)^(-1/3).
double pilot_r(const SurvivalSample& sample, double c = 1.5);
/// s = 3/4 * spread(Z) * (sum delta)^(-1/7).
double pilot_s(const SurvivalSample& sample);

/// Default search boxes: [0.05, 2] * spread(X) for h and [0.01, 1] * spread(Z) for g.
Interval default_box_h(const SurvivalSample& sample);
Interval default_box_g(const SurvivalSample& sample);

/// Plan with the rule-of-thumb pilots; pilot_s only for the smoothed scheme.
ResamplingPlan pilot_plan(const SurvivalSample& sample, ResamplingScheme scheme, int B, std::uint64_t seed,
                          double c = 1.5);

/// Bootstrap MISE over one fixed resample set: every candidate bandwidth is
/// scored against the same replicates (common random numbers).
class BootstrapObjective {
public:
    /// `estimator` is beran or smoothed_beran. The pilot curve is the
    /// estimator evaluated on the original sample with the plan's (r[, s]).
    BootstrapObjective(const SurvivalSample& sample, double x0, Estimator estimator, const ResamplingPlan& plan,
                       const TimeGrid& grid, const KernelSpec& kernel, Exec exec = Exec::parallel);
    /// Explicit replicates and pilot curve, for fixtures.
    BootstrapObjective(std::vector<SurvivalSample> replicates, std::vector<double> pilot_curve, double x0,
                       Estimator estimator, const TimeGrid& grid, const KernelSpec& kernel, Exec exec = Exec::parallel);

    /// (1/B) sum_k integral (S*_k - pilot)^2. +inf on degenerate weights.
    double mise(const Bandwidths& bw) const;
    /// (1/B) sum_k (S*_k(grid[k0]) - pilot(grid[k0]))^2 at one grid index.
    double mse_at(std::size_t k0, const Bandwidths& bw) const;

    std::span<const double> pilot_curve() const noexcept { return pilot_; }
    std::size_t replicates() const noexcept { return sorted_.size(); }
    const ResampleDiagnostics& diagnostics() const noexcept { return diagnostics_; }
    const TimeGrid& grid() const noexcept { return grid_; }

private:
    /// Curves of every replicate at bw; false if any replicate is degenerate.
    bool curves(const Bandwidths& bw, std::vector<double>& out) const;

    std::vector<SortedSample> sorted_;
    std::vector<double> pilot_;
    double x0_;
    Estimator estimator_;
    TimeGrid grid_;
    KernelSpec kernel_;
    Exec exec_;
    ResampleDiagnostics diagnostics_;
};

double bootstrap_mise_1d(const SurvivalSample& sample, double x0, double h, const ResamplingPlan& plan,
                         const TimeGrid& grid, const KernelSpec& kernel);
double bootstrap_mise_2d(const SurvivalSample& sample, double x0, double h, double g, const ResamplingPlan& plan,
                         const TimeGrid& grid, const KernelSpec& kernel);
/// Pointwise variant at time t0 for the Beran estimator (scheme = beran) or
/// the smoothed estimator (scheme = smoothed_beran, g required).
double bootstrap_mse_pointwise(const SurvivalSample& sample, double x0, double t0, const Bandwidths& bw,
                               const ResamplingPlan& plan, const KernelSpec& kernel);

struct SelectionStrategy {
    enum class Kind { grid, multistart } kind = Kind::multistart;
    std::size_t m = 64; // grid points per axis
    QuasiNewtonOptions quasi_newton;
};

struct BandwidthSelection {
    double h_star = 0.0;
    std::optional<double> g_star;
    Interval box_h;
    std::optional<Interval> box_g;
    std::vector<TracePoint> trace;
    double objective = 0.0;
    int B = 0;
    std::uint64_t seed = 0;
    double pilot_r = 0.0;
    std::optional<double> pilot_s;
    ResampleDiagnostics diagnostics;
};

/// Minimize an existing objective over the box(es).
BandwidthSelection select_from_objective(const BootstrapObjective& objective, Interval box_h,
                                         std::optional<Interval> box_g, const SelectionStrategy& strategy);

BandwidthSelection select_bandwidth_1d(const SurvivalSample& sample, double x0, Interval box_h,
                                       const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                       const SelectionStrategy& strategy = {}, Exec exec = Exec::parallel);
BandwidthSelection select_bandwidth_2d(const SurvivalSample& sample, double x0, Interval box_h, Interval box_g,
                                       const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                       const SelectionStrategy& strategy = {}, Exec exec = Exec::parallel);

} // namespace beran
