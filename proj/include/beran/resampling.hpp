#pragma once

#include "beran/kernel.hpp"
#include "beran/parallel.hpp"
#include "beran/sample.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace beran {

enum class ResamplingScheme { beran, smoothed_beran };

/// How X* is drawn: from the empirical covariate distribution, or from its
/// kernel-smoothed version with bandwidth pilot_r.
enum class CovariateDraw { empirical, smoothed };

struct ResamplingPlan {
    ResamplingScheme scheme = ResamplingScheme::beran;
    double pilot_r = 0.0;
    std::optional<double> pilot_s;
    std::uint64_t seed = 0;
    int B = 1;
    /// Unset follows the scheme: empirical for beran, smoothed for smoothed_beran.
    std::optional<CovariateDraw> covariate;

    CovariateDraw covariate_draw() const noexcept {
        return covariate.value_or(scheme == ResamplingScheme::smoothed_beran ? CovariateDraw::smoothed
                                                                             : CovariateDraw::empirical);
    }
    void validate() const;
};

struct ResampleDiagnostics {
    std::size_t saturated_lifetimes = 0;
    std::size_t saturated_censoring = 0;
    std::size_t covariate_retries = 0;

    ResampleDiagnostics& operator+=(const ResampleDiagnostics& o) noexcept {
        saturated_lifetimes += o.saturated_lifetimes;
        saturated_censoring += o.saturated_censoring;
        covariate_retries += o.covariate_retries;
        return *this;
    }
};

struct Draw {
    double value = 0.0;
    bool saturated = false;
};

/// Generalized inverse inf{t : F(t) >= u} of a step cdf with nondecreasing
/// values `cdf` at `atoms`. When u exceeds the last cdf value the draw
/// saturates at `saturation_value`.
Draw inverse_transform_sample(std::span<const double> atoms, std::span<const double> cdf, double u,
                              double saturation_value);

/// Generalized inverse of a continuous cdf by bisection on `bracket` to an
/// absolute tolerance `tol` in t. Saturates at bracket.high when u >= F(high).
Draw inverse_transform_sample(const std::function<double(double)>& cdf, double u, Interval bracket,
                              double tol = 1e-10);

/// Beran estimates of the lifetime law F(.|X_j) and the censoring law
/// G(.|X_j) at every sample covariate, with pilot bandwidth r. Lifetime atoms
/// are the distinct uncensored times, censoring atoms the distinct censored
/// times.
class ConditionalLaws {
public:
    ConditionalLaws(const SurvivalSample& sample, double r, const KernelSpec& kernel);

    std::size_t size() const noexcept { return n_; }
    std::span<const double> lifetime_atoms() const noexcept { return t_atoms_; }
    std::span<const double> censoring_atoms() const noexcept { return c_atoms_; }
    std::span<const double> lifetime_cdf(std::size_t j) const noexcept;
    std::span<const double> censoring_cdf(std::size_t j) const noexcept;
    double max_time() const noexcept { return max_time_; }

    /// Laws at an arbitrary covariate value. False on degenerate weights.
    bool laws_at(double x, std::span<double> lifetime_cdf, std::span<double> censoring_cdf) const;

private:
    std::size_t n_ = 0;
    double r_ = 0.0;
    KernelSpec kernel_;
    double max_time_ = 0.0;
    std::vector<double> t_atoms_;
    std::vector<double> c_atoms_;
    std::vector<std::size_t> t_groups_;
    std::vector<std::size_t> c_groups_;
    std::vector<double> t_cdf_;
    std::vector<double> c_cdf_;
    std::vector<double> sorted_x_;
    std::vector<int> sorted_delta_;
    std::vector<std::size_t> group_starts_;
    std::vector<double> group_times_;
};

struct ResampleSet {
    std::vector<SurvivalSample> replicates;
    ResampleDiagnostics diagnostics;
};

/// Replicate k of the plan. Uses the RNG stream (plan.seed, k) only.
SurvivalSample draw_replicate(const SurvivalSample& sample, const ConditionalLaws& laws, const ResamplingPlan& plan,
                              const KernelSpec& kernel, std::size_t k, ResampleDiagnostics& diagnostics);

/// B bootstrap resamples: X* from the covariate distribution, T* ~ F(.|X*)
/// and C* ~ G(.|X*) independently, Z* = min(T*, C*), delta* = I(T* <= C*).
/// The smoothed scheme perturbs T* and C* by pilot_s times a kernel deviate,
/// which draws them from the smoothed Beran laws.
ResampleSet resample(const SurvivalSample& sample, const ResamplingPlan& plan, const KernelSpec& kernel,
                     Exec exec = Exec::parallel);

} // namespace beran
