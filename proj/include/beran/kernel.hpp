#pragma once

#include "beran/sample.hpp"

#include <optional>

namespace beran {

enum class KernelFamily { truncated_gaussian };

/// Covariate and time kernel. The truncation range is in kernel-argument units;
/// with the default (-50, 50) the kernel equals the standard normal density to
/// double precision. `support`, when set, declares the covariate support and
/// turns on reflection about its endpoints in every covariate weight.
struct KernelSpec {
    KernelFamily family = KernelFamily::truncated_gaussian;
    Interval truncation{-50.0, 50.0};
    std::optional<Interval> support;

    void validate() const;
};

double standard_normal_pdf(double u) noexcept;
double standard_normal_cdf(double u) noexcept;

/// K(u): truncated Gaussian density renormalized to integrate to one.
double eval_kernel(const KernelSpec& spec, double u) noexcept;

/// Integrated kernel, the distribution function of K. Exact (erfc based).
double eval_integrated_kernel(const KernelSpec& spec, double t) noexcept;

/// Integrated kernel for the hot loops of the smoothed estimator. Uses a
/// quintic Hermite table of the normal cdf; agrees with
/// eval_integrated_kernel to within 1e-14.
class IntegratedKernel {
public:
    explicit IntegratedKernel(const KernelSpec& spec);

    double operator()(double t) const noexcept;

    /// The value is exactly 0 for t <= saturated_low() and exactly 1 for
    /// t >= saturated_high().
    double saturated_low() const noexcept { return saturated_low_; }
    double saturated_high() const noexcept { return saturated_high_; }

private:
    double lo_;
    double hi_;
    double cdf_lo_;
    double inv_mass_;
    double saturated_low_;
    double saturated_high_;
};

/// Unnormalized covariate weight K((x0 - xi)/h), plus the two mirror images
/// of xi about the support endpoints when the kernel declares a support.
double covariate_kernel(const KernelSpec& spec, double x0, double xi, double h) noexcept;

/// Returns the sample with every point mirrored across both support endpoints
/// (x -> 2a - x and x -> 2b - x), keeping (z, delta). Order: originals, then
/// reflections about a, then reflections about b.
SurvivalSample reflect_covariates(const SurvivalSample& sample, Interval support);

} // namespace beran
