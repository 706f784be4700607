#include "beran/resampling.hpp"

#include "beran/error.hpp"
#include "beran/estimators.hpp"
#include "beran/rng.hpp"

#include <algorithm>
#include <cmath>

namespace beran {

void ResamplingPlan::validate() const {
    if (!(pilot_r > 0.0) || !std::isfinite(pilot_r))
        throw Error(ErrorKind::invalid_input, "pilot bandwidth r must be positive");
    if (scheme == ResamplingScheme::smoothed_beran && (!pilot_s || !(*pilot_s > 0.0) || !std::isfinite(*pilot_s)))
        throw Error(ErrorKind::invalid_input, "smoothed resampling needs a positive pilot bandwidth s");
    if (B < 1) throw Error(ErrorKind::invalid_input, "number of resamples B must be >= 1");
}

Draw inverse_transform_sample(std::span<const double> atoms, std::span<const double> cdf, double u,
                              double saturation_value) {
    if (cdf.empty() || u > cdf.back()) return {saturation_value, true};
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return {atoms[static_cast<std::size_t>(it - cdf.begin())], false};
}

Draw inverse_transform_sample(const std::function<double(double)>& cdf, double u, Interval bracket, double tol) {
    if (u >= cdf(bracket.high)) {
        // The generalized inverse still exists when the plateau is reached
        // exactly; only a mass deficit saturates.
        if (u > cdf(bracket.high)) return {bracket.high, true};
    }
    double lo = bracket.low, hi = bracket.high;
    if (cdf(lo) >= u) return {lo, false};
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) >= u)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, false};
}

ConditionalLaws::ConditionalLaws(const SurvivalSample& sample, double r, const KernelSpec& kernel)
    : n_(sample.size()), r_(r), kernel_(kernel) {
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "pilot bandwidth r must be positive");
    const SortedSample sorted(sample);
    const auto starts = sorted.group_starts();
    const auto delta = sorted.delta();
    for (std::size_t g = 0; g < sorted.groups(); ++g) {
        bool has_event = false, has_censoring = false;
        for (std::size_t i = starts[g]; i < starts[g + 1]; ++i) (delta[i] == 1 ? has_event : has_censoring) = true;
        if (has_event) {
            t_atoms_.push_back(sorted.group_times()[g]);
            t_groups_.push_back(g);
        }
        if (has_censoring) {
            c_atoms_.push_back(sorted.group_times()[g]);
            c_groups_.push_back(g);
        }
    }
    max_time_ = sorted.group_times().back();
    sorted_x_.assign(sorted.x().begin(), sorted.x().end());
    sorted_delta_.assign(sorted.delta().begin(), sorted.delta().end());
    group_starts_.assign(starts.begin(), starts.end());
    group_times_.assign(sorted.group_times().begin(), sorted.group_times().end());

    t_cdf_.resize(n_ * t_atoms_.size());
    c_cdf_.resize(n_ * c_atoms_.size());
    const auto x = sample.x();
    for_each_index(n_, Exec::parallel, [&](std::size_t j) {
        const bool ok = laws_at(x[j], std::span<double>(t_cdf_).subspan(j * t_atoms_.size(), t_atoms_.size()),
                                std::span<double>(c_cdf_).subspan(j * c_atoms_.size(), c_atoms_.size()));
        if (!ok) throw Error(ErrorKind::degenerate_weights, "degenerate weights at a sample covariate");
    });
}

std::span<const double> ConditionalLaws::lifetime_cdf(std::size_t j) const noexcept {
    return std::span<const double>(t_cdf_).subspan(j * t_atoms_.size(), t_atoms_.size());
}

std::span<const double> ConditionalLaws::censoring_cdf(std::size_t j) const noexcept {
    return std::span<const double>(c_cdf_).subspan(j * c_atoms_.size(), c_atoms_.size());
}

bool ConditionalLaws::laws_at(double x, std::span<double> lifetime_cdf, std::span<double> censoring_cdf) const {
    // Rebuild a light SortedSample view from the stored sorted columns.
    const std::size_t n = sorted_x_.size();
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = covariate_kernel(kernel_, x, sorted_x_[i], r_);
        total += w[i];
    }
    if (!(total > 0.0)) return false;
    for (auto& v : w) v /= total;

    const std::size_t groups = group_times_.size();
    std::vector<double> tail(groups);
    double acc = 0.0;
    for (std::size_t g = groups; g-- > 0;) {
        for (std::size_t i = group_starts_[g]; i < group_starts_[g + 1]; ++i) acc += w[i];
        tail[g] = acc;
    }
    std::vector<double> surv_t(groups), surv_c(groups);
    double st = 1.0, sc = 1.0;
    for (std::size_t g = 0; g < groups; ++g) {
        double dt = 0.0, dc = 0.0;
        for (std::size_t i = group_starts_[g]; i < group_starts_[g + 1]; ++i)
            (sorted_delta_[i] == 1 ? dt : dc) += w[i];
        const auto factor = [&](double d) {
            if (tail[g] <= 1e-12) return d <= 1e-12 ? 1.0 : 0.0;
            return std::clamp(1.0 - d / tail[g], 0.0, 1.0);
        };
        st *= factor(dt);
        sc *= factor(dc);
        surv_t[g] = st;
        surv_c[g] = sc;
    }
    for (std::size_t m = 0; m < t_groups_.size(); ++m) lifetime_cdf[m] = 1.0 - surv_t[t_groups_[m]];
    for (std::size_t m = 0; m < c_groups_.size(); ++m) censoring_cdf[m] = 1.0 - surv_c[c_groups_[m]];
    return true;
}

namespace {

double kernel_deviate(Rng& rng, std::normal_distribution<double>& normal, const KernelSpec& kernel) {
    for (;;) {
        const double e = normal(rng);
        if (e > kernel.truncation.low && e < kernel.truncation.high) return e;
    }
}

double reflect_into(double v, const Interval& support) {
    for (int guard = 0; guard < 64 && !support.contains(v); ++guard) {
        if (v < support.low) v = 2.0 * support.low - v;
        if (v > support.high) v = 2.0 * support.high - v;
    }
    return support.clamp(v);
}

} // namespace

SurvivalSample draw_replicate(const SurvivalSample& sample, const ConditionalLaws& laws, const ResamplingPlan& plan,
                              const KernelSpec& kernel, std::size_t k, ResampleDiagnostics& diagnostics) {
    const std::size_t n = sample.size();
    Rng rng = make_stream(plan.seed, {static_cast<std::uint64_t>(k)});
    std::normal_distribution<double> normal(0.0, 1.0);
    const bool smoothed_times = plan.scheme == ResamplingScheme::smoothed_beran;
    const bool smoothed_cov = plan.covariate_draw() == CovariateDraw::smoothed;

    std::vector<double> xs(n), zs(n);
    std::vector<int> ds(n);
    std::vector<double> t_cdf, c_cdf;
    if (smoothed_cov) {
        t_cdf.resize(laws.lifetime_atoms().size());
        c_cdf.resize(laws.censoring_atoms().size());
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto j = static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(n));
        if (j >= n) j = n - 1;
        std::span<const double> ft = laws.lifetime_cdf(j);
        std::span<const double> gc = laws.censoring_cdf(j);
        double x = sample.x()[j];
        if (smoothed_cov) {
            double cand = x + plan.pilot_r * kernel_deviate(rng, normal, kernel);
            if (kernel.support) cand = reflect_into(cand, *kernel.support);
            if (laws.laws_at(cand, t_cdf, c_cdf)) {
                x = cand;
                ft = t_cdf;
                gc = c_cdf;
            } else {
                ++diagnostics.covariate_retries;
            }
        }
        const double u_t = uniform_open(rng);
        const double u_c = uniform_open(rng);
        Draw t = inverse_transform_sample(laws.lifetime_atoms(), ft, u_t, laws.max_time());
        Draw c = inverse_transform_sample(laws.censoring_atoms(), gc, u_c, laws.max_time());
        if (smoothed_times) {
            const double e_t = kernel_deviate(rng, normal, kernel);
            const double e_c = kernel_deviate(rng, normal, kernel);
            if (!t.saturated) t.value = std::max(0.0, t.value + *plan.pilot_s * e_t);
            if (!c.saturated) c.value = std::max(0.0, c.value + *plan.pilot_s * e_c);
        }
        if (t.saturated) ++diagnostics.saturated_lifetimes;
        if (c.saturated) ++diagnostics.saturated_censoring;
        xs[i] = x;
        zs[i] = std::min(t.value, c.value);
        ds[i] = t.value <= c.value ? 1 : 0;
    }
    return SurvivalSample(std::move(xs), std::move(zs), std::move(ds));
}

ResampleSet resample(const SurvivalSample& sample, const ResamplingPlan& plan, const KernelSpec& kernel, Exec exec) {
    plan.validate();
    kernel.validate();
    const ConditionalLaws laws(sample, plan.pilot_r, kernel);
    const auto B = static_cast<std::size_t>(plan.B);
    ResampleSet out;
    out.replicates.resize(B);
    std::vector<ResampleDiagnostics> diag(B);
    for_each_index(B, exec, [&](std::size_t k) {
        out.replicates[k] = draw_replicate(sample, laws, plan, kernel, k, diag[k]);
    });
    for (const auto& d : diag) out.diagnostics += d;
    return out;
}

} // namespace beran
