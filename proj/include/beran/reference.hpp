#pragma once

// Direct, serial transcriptions of the estimator formulas. They are slow
// (quadratic per time point) and exist to cross-check the optimized kernels
// in tests and in the kernel benchmark.

#include "beran/kernel.hpp"
#include "beran/sample.hpp"

#include <vector>

namespace beran::reference {

/// Weights by explicit augmentation with reflect_covariates (when the kernel
/// declares a support) and folding the three copies of each point.
std::vector<double> beran_weights(const SurvivalSample& sample, double x0, double h, const KernelSpec& kernel);

/// Product over i of (1 - I(Z_i <= t, delta_i = 1) w_i / (1 - sum of w_j over rows j
/// ahead of i)), rows ordered by time with events ahead of censorings at ties.
double beran_at(const SurvivalSample& sample, std::span<const double> weights, double t);

/// 1 - sum_i s_(i) K((t - Z_(i))/g) with s_(i) the Beran drops between
/// consecutive order statistics and Z_(0) = 0.
double smoothed_at(const SurvivalSample& sample, std::span<const double> weights, double g, double t,
                   const KernelSpec& kernel);

std::vector<double> beran_curve(const SurvivalSample& sample, double x0, double h, const TimeGrid& grid,
                                const KernelSpec& kernel);
std::vector<double> smoothed_curve(const SurvivalSample& sample, double x0, double h, double g,
                                   const TimeGrid& grid, const KernelSpec& kernel);

} // namespace beran::reference
