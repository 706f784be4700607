#include "beran/regions.hpp"

#include "beran/error.hpp"

#include <algorithm>
#include <cmath>

namespace beran {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::invalid_input, "alpha must lie in (0, 1)");
}

void check_bundle(const CurveBundle& c, std::size_t points) {
    if (c.points != points || c.values.size() != c.count * c.points)
        throw Error(ErrorKind::invalid_input, "replicate curves do not match the grid");
}

} // namespace

const char* to_string(RegionMethod m) noexcept {
    return m == RegionMethod::method1 ? "method1" : "method2";
}

std::vector<double> bootstrap_sigma(const CurveBundle& curves) {
    if (curves.count < 2) throw Error(ErrorKind::insufficient_replicates, "sigma* needs at least two replicates");
    const auto B = static_cast<double>(curves.count);
    std::vector<double> sigma(curves.points), column(curves.count);
    for (std::size_t i = 0; i < curves.points; ++i) {
        for (std::size_t k = 0; k < curves.count; ++k) column[k] = curves.values[k * curves.points + i];
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        if (*lo == *hi) {
            // identical replicates: avoid a rounding-level sigma from the mean
            sigma[i] = 0.0;
            continue;
        }
        const double mean = pairwise_sum(column) / B;
        for (auto& v : column) v = (v - mean) * (v - mean);
        sigma[i] = std::sqrt(pairwise_sum(column) / B);
    }
    return sigma;
}

double coverage_fraction(double lambda, std::span<const double> pilot, const CurveBundle& curves,
                         std::span<const double> sigma) {
    check_bundle(curves, pilot.size());
    if (sigma.size() != pilot.size()) throw Error(ErrorKind::invalid_input, "sigma does not match the grid");
    if (curves.count == 0) return 0.0;
    std::size_t inside = 0;
    for (std::size_t k = 0; k < curves.count; ++k) {
        const auto c = curves.curve(k);
        bool all = true;
        for (std::size_t i = 0; i < c.size() && all; ++i) all = std::abs(pilot[i] - c[i]) <= lambda * sigma[i];
        inside += all;
    }
    return static_cast<double>(inside) / static_cast<double>(curves.count);
}

LambdaCalibration calibrate_lambda(std::span<const double> pilot, const CurveBundle& curves,
                                   std::span<const double> sigma, double alpha, double zeta) {
    check_alpha(alpha);
    if (!(zeta > 0.0)) throw Error(ErrorKind::invalid_input, "tolerance zeta must be positive");
    if (std::all_of(sigma.begin(), sigma.end(), [](double v) { return v == 0.0; }))
        throw Error(ErrorKind::degenerate_variance, "sigma* vanishes on the whole grid");
    const double target = 1.0 - alpha;
    auto p = [&](double l) { return coverage_fraction(l, pilot, curves, sigma); };
    double lo = 0.0, hi = 1.0;
    double p_lo = p(lo), p_hi = p(hi);
    int doublings = 0;
    while (p_hi < target) {
        if (++doublings > 60)
            throw Error(ErrorKind::degenerate_variance,
                        "no multiple of sigma* reaches the target coverage (sigma* vanishes where curves differ)");
        hi *= 2.0;
        p_hi = p(hi);
    }
    LambdaCalibration out;
    if (p_lo >= target) {
        // Every replicate already matches the pilot exactly.
        out.lambda = 0.0;
        out.coverage = p_lo;
        return out;
    }
    for (int it = 1; it <= 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double p_mid = p(mid);
        out.iterations = it;
        if (p_mid == target || p_hi - p_lo < zeta) {
            out.lambda = mid;
            out.coverage = p_mid;
            return out;
        }
        if (p_mid > target) {
            hi = mid;
            p_hi = p_mid;
        } else {
            lo = mid;
            p_lo = p_mid;
        }
        if (hi - lo <= 1e-12 * hi) break;
    }
    // The step of p sits inside [lo, hi]; hi keeps the target coverage.
    out.lambda = hi;
    out.coverage = p_hi;
    return out;
}

double order_statistic_radius(std::span<const double> distances, double alpha) {
    check_alpha(alpha);
    if (distances.empty()) throw Error(ErrorKind::insufficient_replicates, "no replicate distances");
    std::vector<double> q(distances.begin(), distances.end());
    std::sort(q.begin(), q.end());
    const double B = static_cast<double>(q.size());
    // Guard the ceiling against B * (1 - alpha) landing a hair above an integer.
    const double pos = B * (1.0 - alpha);
    auto j = static_cast<std::size_t>(std::ceil(pos - 1e-9 * std::max(1.0, pos)));
    j = std::clamp<std::size_t>(j, 1, q.size());
    return q[j - 1];
}

double curve_distance(std::span<const double> a, std::span<const double> b, const TimeGrid& grid, Norm norm) {
    if (a.size() != grid.size() || b.size() != grid.size())
        throw Error(ErrorKind::invalid_input, "curves do not match the grid");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    switch (norm) {
    case Norm::sup:
        return *std::max_element(d.begin(), d.end());
    case Norm::l1:
        return grid.integrate(d);
    case Norm::l2:
        for (auto& v : d) v *= v;
        return std::sqrt(grid.integrate(d));
    }
    return 0.0;
}

bool in_ball(std::span<const double> curve, std::span<const double> center, double rho, const TimeGrid& grid,
             Norm norm) {
    return curve_distance(curve, center, grid, norm) < rho;
}

ConfidenceRegion clamp_and_plateau_fix(ConfidenceRegion region) {
    for (auto& v : region.lower) v = std::clamp(v, 0.0, 1.0);
    for (auto& v : region.upper) v = std::clamp(v, 0.0, 1.0);
    std::size_t first = 0;
    while (first < region.lower.size() && region.lower[first] >= 1.0 && region.upper[first] >= 1.0) ++first;
    if (first == 0) return region;
    if (first == region.lower.size()) {
        region.degenerate = true;
        return region;
    }
    // t' is the first grid point with l < 1; for a nonincreasing band it is `first`.
    std::size_t tp = first;
    while (tp < region.lower.size() && region.lower[tp] >= 1.0) ++tp;
    if (tp == region.lower.size()) {
        region.degenerate = true;
        return region;
    }
    for (std::size_t i = 0; i < first; ++i) region.lower[i] = region.lower[tp];
    return region;
}

BootstrapCurves bootstrap_curves(const SurvivalSample& sample, double x0, Estimator estimator, const Bandwidths& bw,
                                 const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                 Exec exec) {
    if (estimator == Estimator::kaplan_meier)
        throw Error(ErrorKind::invalid_input, "regions need the beran or smoothed-beran estimator");
    if ((estimator == Estimator::smoothed_beran) != (plan.scheme == ResamplingScheme::smoothed_beran))
        throw Error(ErrorKind::invalid_input, "resampling scheme does not match the estimator");
    plan.validate();
    BootstrapCurves out;
    out.estimate = estimate_curve(sample, estimator, x0, bw, grid, kernel).values;
    out.pilot = estimate_curve(sample, estimator, x0, Bandwidths{plan.pilot_r, plan.pilot_s}, grid, kernel).values;
    ResampleSet set = resample(sample, plan, kernel, exec);
    out.diagnostics = set.diagnostics;
    const std::size_t nT = grid.size();
    out.curves.count = set.replicates.size();
    out.curves.points = nT;
    out.curves.values.assign(out.curves.count * nT, 0.0);
    for_each_index(out.curves.count, exec, [&](std::size_t k) {
        const SortedSample sorted(set.replicates[k]);
        CurveEvaluator eval(sorted, kernel);
        if (!eval.evaluate(estimator, x0, bw, grid, std::span<double>(out.curves.values).subspan(k * nT, nT)))
            throw Error(ErrorKind::degenerate_weights, "degenerate weights at x0 in a bootstrap replicate");
    });
    return out;
}

ConfidenceRegion build_method1(const BootstrapCurves& bc, const TimeGrid& grid, double alpha, double zeta) {
    check_alpha(alpha);
    check_bundle(bc.curves, grid.size());
    std::vector<double> sigma = bootstrap_sigma(bc.curves);
    const LambdaCalibration cal = calibrate_lambda(bc.pilot, bc.curves, sigma, alpha, zeta);
    ConfidenceRegion r;
    r.grid = grid;
    r.method = RegionMethod::method1;
    r.level = 1.0 - alpha;
    r.calibration = cal.lambda;
    r.estimate = bc.estimate;
    r.lower.resize(grid.size());
    r.upper.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.lower[i] = bc.estimate[i] - cal.lambda * sigma[i];
        r.upper[i] = bc.estimate[i] + cal.lambda * sigma[i];
    }
    r.sigma_star = std::move(sigma);
    r.diagnostics = bc.diagnostics;
    return clamp_and_plateau_fix(std::move(r));
}

ConfidenceRegion build_method2(const BootstrapCurves& bc, const TimeGrid& grid, double alpha, Norm norm) {
    check_alpha(alpha);
    check_bundle(bc.curves, grid.size());
    if (norm != Norm::sup)
        throw Error(ErrorKind::invalid_input, "only the sup-norm ball has a pointwise envelope; use in_ball for L1/L2");
    std::vector<double> q(bc.curves.count);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = curve_distance(bc.curves.curve(k), bc.pilot, grid, norm);
    const double rho = order_statistic_radius(q, alpha);
    ConfidenceRegion r;
    r.grid = grid;
    r.method = RegionMethod::method2;
    r.level = 1.0 - alpha;
    r.calibration = rho;
    r.estimate = bc.estimate;
    r.lower.resize(grid.size());
    r.upper.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.lower[i] = bc.estimate[i] - rho;
        r.upper[i] = bc.estimate[i] + rho;
    }
    r.diagnostics = bc.diagnostics;
    return clamp_and_plateau_fix(std::move(r));
}

namespace {

ConfidenceRegion tag(ConfidenceRegion r, double x0, Estimator estimator, const Bandwidths& bw,
                     const ResamplingPlan& plan) {
    r.x0 = x0;
    r.estimator = estimator;
    r.bandwidths = bw;
    r.seed = plan.seed;
    return r;
}

} // namespace

ConfidenceRegion region_method1(const SurvivalSample& sample, double x0, Estimator estimator, const Bandwidths& bw,
                                const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                double alpha, Exec exec) {
    check_alpha(alpha);
    if (plan.B < 2) throw Error(ErrorKind::insufficient_replicates, "method 1 needs B >= 2");
    const BootstrapCurves bc = bootstrap_curves(sample, x0, estimator, bw, plan, grid, kernel, exec);
    return tag(build_method1(bc, grid, alpha), x0, estimator, bw, plan);
}

ConfidenceRegion region_method2(const SurvivalSample& sample, double x0, Estimator estimator, const Bandwidths& bw,
                                const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                double alpha, Norm norm, Exec exec) {
    check_alpha(alpha);
    const BootstrapCurves bc = bootstrap_curves(sample, x0, estimator, bw, plan, grid, kernel, exec);
    return tag(build_method2(bc, grid, alpha, norm), x0, estimator, bw, plan);
}

} // namespace beran
