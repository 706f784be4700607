#pragma once

#include "beran/bandwidth.hpp"
#include "beran/regions.hpp"
#include "beran/simulation.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace beran {

struct RelativeMetrics {
    double mean_h = 0.0;
    double sd_h = 0.0;
    std::optional<double> mean_g;
    std::optional<double> sd_g;
    double h_bar = 0.0;      // mean |H*_j|, or mean norm of D*_j in 2-D
    double mean_rmise = 0.0; // mean RMISE(h*_j)
    double r_bar = 0.0;      // mean R*_j, unclipped
    std::vector<double> h_rel;
    std::vector<double> r_rel;
};

/// `rmise` maps a bandwidth to its RMISE; rmise_opt is RMISE at the optimum.
RelativeMetrics relative_metrics(std::span<const Bandwidths> selected, const Bandwidths& optimum, double rmise_opt,
                                 const std::function<double(const Bandwidths&)>& rmise);

/// Interval width plus 2/alpha times the distance from s to [l, u].
double winkler_score(double lower, double upper, double truth, double alpha);

struct RegionMetrics {
    std::size_t regions = 0;
    double coverage = 0.0;
    double pointwise_coverage = 0.0;
    double average_width = 0.0;
    double iws = 0.0;
    bool winkler_dominance = true;
};

/// Coverage counts the truth inside the open band (l, u).
RegionMetrics region_metrics(std::span<const ConfidenceRegion> regions, const SimModel& model, double alpha);

struct BenchConfig {
    ModelId model = ModelId::model1;
    double censoring = 0.2;
    Estimator estimator = Estimator::beran;
    std::size_t N = 50;
    int B = 200;
    std::size_t n = 400;
    std::size_t n_T = 100;
    std::size_t N_mise = 100; // samples behind the Monte Carlo MISE curve
    std::size_t mise_grid = 41;
    std::uint64_t seed = 1;
    bool select = true;
    bool regions = true;
    double alpha = 0.05;
    SelectionStrategy strategy;
    std::optional<double> pilot_c;
    std::optional<Bandwidths> mise_bandwidths;
    std::optional<double> budget_seconds;
};

struct SampleOutcome {
    std::optional<Bandwidths> selected;
    std::optional<ConfidenceRegion> method1;
    std::optional<ConfidenceRegion> method2;
    std::optional<std::string> region_error;
    double pilot_r = 0.0;
    std::optional<double> pilot_s;
};

struct BenchReport {
    BenchConfig config;
    Bandwidths mise_bandwidths;
    double rmise_at_optimal = 0.0;
    std::size_t completed = 0;
    bool complete = true;
    std::optional<RelativeMetrics> selection;
    std::optional<RegionMetrics> method1;
    std::optional<RegionMetrics> method2;
    std::size_t region_failures = 0;
    ResampleDiagnostics diagnostics;
    std::vector<SampleOutcome> samples;
};

/// Bandwidth minimizing the Monte Carlo MISE: grid search over the box, then
/// a bounded quasi-Newton refinement inside the neighbouring cells.
Bandwidths mise_optimal_bandwidths(const MonteCarloMise& mc, Interval box_h, std::optional<Interval> box_g,
                                   std::size_t grid_points);

/// Search boxes used for the Monte Carlo optimum of a model.
Interval model_box_h(const SimModel& model);
Interval model_box_g(const SimModel& model);

/// N samples x (bandwidth selection and/or both region methods). Sample j
/// draws its data from derive_seed(seed, {1, j}) and its resamples from
/// derive_seed(seed, {2, j}); the Monte Carlo MISE uses derive_seed(seed, {3}).
BenchReport run_benchmark(const BenchConfig& config);

struct ScalingPoint {
    std::size_t n = 0;
    double seconds = 0.0;
    double h_star = 0.0;
};

/// Wall time of one 1-D bandwidth selection per sample size.
std::vector<ScalingPoint> run_scaling_bench(ModelId model, double censoring, std::span<const std::size_t> sizes, int B,
                                            std::uint64_t seed, const SelectionStrategy& strategy);

} // namespace beran
