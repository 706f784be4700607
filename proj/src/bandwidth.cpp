#include "beran/bandwidth.hpp"

#include "beran/error.hpp"

#include <cmath>
#include <limits>

namespace beran {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::size_t require_events(const SurvivalSample& sample) {
    const std::size_t d = sample.events();
    if (d == 0) throw Error(ErrorKind::no_events, "every observation is censored");
    return d;
}

void check_bandwidth(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::invalid_input, std::string(what) + " must be positive");
}

Interval positive_box(double lo, double hi, const char* what) {
    if (!(hi > 0.0)) throw Error(ErrorKind::invalid_input, std::string("cannot build a default ") + what +
                                                               " box: the sample spread is zero");
    return {lo, hi};
}

} // namespace

double central_spread(std::span<const double> values) {
    return quantile(values, 0.975) - quantile(values, 0.025);
}

double pilot_r(const SurvivalSample& sample, double c) {
    check_bandwidth(c, "constant c");
    const auto d = static_cast<double>(require_events(sample));
    return c * central_spread(sample.x()) / 2.0 * std::pow(d, -1.0 / 3.0);
}

double pilot_s(const SurvivalSample& sample) {
    const auto d = static_cast<double>(require_events(sample));
    return 0.75 * central_spread(sample.z()) * std::pow(d, -1.0 / 7.0);
}

Interval default_box_h(const SurvivalSample& sample) {
    const double s = central_spread(sample.x());
    return positive_box(0.05 * s, 2.0 * s, "h");
}

Interval default_box_g(const SurvivalSample& sample) {
    const double s = central_spread(sample.z());
    return positive_box(0.01 * s, s, "g");
}

ResamplingPlan pilot_plan(const SurvivalSample& sample, ResamplingScheme scheme, int B, std::uint64_t seed,
                          double c) {
    ResamplingPlan plan;
    plan.scheme = scheme;
    plan.pilot_r = pilot_r(sample, c);
    if (scheme == ResamplingScheme::smoothed_beran) plan.pilot_s = pilot_s(sample);
    plan.B = B;
    plan.seed = seed;
    plan.validate();
    return plan;
}

BootstrapObjective::BootstrapObjective(const SurvivalSample& sample, double x0, Estimator estimator,
                                       const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                       Exec exec)
    : x0_(x0), estimator_(estimator), grid_(grid), kernel_(kernel), exec_(exec) {
    if (estimator == Estimator::kaplan_meier)
        throw Error(ErrorKind::invalid_input, "bandwidth selection needs the beran or smoothed-beran estimator");
    if ((estimator == Estimator::smoothed_beran) != (plan.scheme == ResamplingScheme::smoothed_beran))
        throw Error(ErrorKind::invalid_input, "resampling scheme does not match the estimator");
    plan.validate();
    Bandwidths pilot_bw{plan.pilot_r, plan.pilot_s};
    pilot_ = estimate_curve(sample, estimator, x0, pilot_bw, grid, kernel).values;
    ResampleSet set = resample(sample, plan, kernel, exec);
    diagnostics_ = set.diagnostics;
    sorted_.resize(set.replicates.size());
    for_each_index(sorted_.size(), exec, [&](std::size_t k) { sorted_[k] = SortedSample(set.replicates[k]); });
}

BootstrapObjective::BootstrapObjective(std::vector<SurvivalSample> replicates, std::vector<double> pilot_curve,
                                       double x0, Estimator estimator, const TimeGrid& grid, const KernelSpec& kernel,
                                       Exec exec)
    : pilot_(std::move(pilot_curve)), x0_(x0), estimator_(estimator), grid_(grid), kernel_(kernel), exec_(exec) {
    if (replicates.empty()) throw Error(ErrorKind::invalid_input, "need at least one replicate");
    if (pilot_.size() != grid.size()) throw Error(ErrorKind::invalid_input, "pilot curve does not match the grid");
    if (estimator == Estimator::kaplan_meier)
        throw Error(ErrorKind::invalid_input, "bandwidth selection needs the beran or smoothed-beran estimator");
    kernel.validate();
    sorted_.reserve(replicates.size());
    for (const auto& r : replicates) sorted_.emplace_back(r);
}

bool BootstrapObjective::curves(const Bandwidths& bw, std::vector<double>& out) const {
    check_bandwidth(bw.h, "bandwidth h");
    if (estimator_ == Estimator::smoothed_beran) {
        if (!bw.g) throw Error(ErrorKind::invalid_input, "the smoothed estimator needs a bandwidth g");
        check_bandwidth(*bw.g, "bandwidth g");
    }
    const std::size_t nT = grid_.size();
    out.assign(sorted_.size() * nT, 0.0);
    std::vector<char> ok(sorted_.size(), 1);
    for_each_index(sorted_.size(), exec_, [&](std::size_t k) {
        CurveEvaluator eval(sorted_[k], kernel_);
        ok[k] = eval.evaluate(estimator_, x0_, bw, grid_, std::span<double>(out).subspan(k * nT, nT));
    });
    for (char c : ok)
        if (!c) return false;
    return true;
}

double BootstrapObjective::mise(const Bandwidths& bw) const {
    std::vector<double> all;
    if (!curves(bw, all)) return inf;
    const std::size_t nT = grid_.size();
    std::vector<double> per(sorted_.size()), sq(nT);
    for (std::size_t k = 0; k < sorted_.size(); ++k) {
        for (std::size_t i = 0; i < nT; ++i) {
            const double e = all[k * nT + i] - pilot_[i];
            sq[i] = e * e;
        }
        per[k] = grid_.integrate(sq);
    }
    return pairwise_sum(per) / static_cast<double>(sorted_.size());
}

double BootstrapObjective::mse_at(std::size_t k0, const Bandwidths& bw) const {
    if (k0 >= grid_.size()) throw Error(ErrorKind::invalid_input, "grid index out of range");
    std::vector<double> all;
    if (!curves(bw, all)) return inf;
    const std::size_t nT = grid_.size();
    std::vector<double> per(sorted_.size());
    for (std::size_t k = 0; k < sorted_.size(); ++k) {
        const double e = all[k * nT + k0] - pilot_[k0];
        per[k] = e * e;
    }
    return pairwise_sum(per) / static_cast<double>(sorted_.size());
}

double bootstrap_mise_1d(const SurvivalSample& sample, double x0, double h, const ResamplingPlan& plan,
                         const TimeGrid& grid, const KernelSpec& kernel) {
    if (plan.scheme != ResamplingScheme::beran)
        throw Error(ErrorKind::invalid_input, "one-dimensional selection uses the beran resampling scheme");
    return BootstrapObjective(sample, x0, Estimator::beran, plan, grid, kernel).mise({h, std::nullopt});
}

double bootstrap_mise_2d(const SurvivalSample& sample, double x0, double h, double g, const ResamplingPlan& plan,
                         const TimeGrid& grid, const KernelSpec& kernel) {
    if (plan.scheme != ResamplingScheme::smoothed_beran)
        throw Error(ErrorKind::invalid_input, "two-dimensional selection uses the smoothed resampling scheme");
    return BootstrapObjective(sample, x0, Estimator::smoothed_beran, plan, grid, kernel).mise({h, g});
}

double bootstrap_mse_pointwise(const SurvivalSample& sample, double x0, double t0, const Bandwidths& bw,
                               const ResamplingPlan& plan, const KernelSpec& kernel) {
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw Error(ErrorKind::invalid_input, "t0 must be finite and >= 0");
    const Estimator est =
        plan.scheme == ResamplingScheme::smoothed_beran ? Estimator::smoothed_beran : Estimator::beran;
    // Second node only completes a valid grid; it is not used.
    const TimeGrid grid({t0, t0 + 1.0});
    return BootstrapObjective(sample, x0, est, plan, grid, kernel).mse_at(0, bw);
}

BandwidthSelection select_from_objective(const BootstrapObjective& objective, Interval box_h,
                                         std::optional<Interval> box_g, const SelectionStrategy& strategy) {
    std::vector<Interval> box{box_h};
    if (box_g) box.push_back(*box_g);
    for (const auto& b : box)
        if (!(b.low > 0.0)) throw Error(ErrorKind::invalid_input, "bandwidth boxes must lie in (0, inf)");
    const bool two_d = box_g.has_value();
    const BoxObjective f = [&](std::span<const double> p) {
        Bandwidths bw{p[0], two_d ? std::optional<double>(p[1]) : std::nullopt};
        return objective.mise(bw);
    };
    OptimizeResult res = strategy.kind == SelectionStrategy::Kind::grid
                             ? minimize_over_grid(f, box, strategy.m)
                             : minimize_multistart(f, box, strategy.quasi_newton);
    if (!std::isfinite(res.value))
        throw Error(ErrorKind::selection_failed, "bootstrap MISE is infinite over the whole search box");
    BandwidthSelection sel;
    sel.h_star = box_h.clamp(res.argmin[0]);
    if (two_d) sel.g_star = box_g->clamp(res.argmin[1]);
    sel.box_h = box_h;
    sel.box_g = box_g;
    sel.trace = std::move(res.trace);
    sel.objective = res.value;
    sel.B = static_cast<int>(objective.replicates());
    sel.diagnostics = objective.diagnostics();
    return sel;
}

BandwidthSelection select_bandwidth_1d(const SurvivalSample& sample, double x0, Interval box_h,
                                       const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                       const SelectionStrategy& strategy, Exec exec) {
    if (plan.scheme != ResamplingScheme::beran)
        throw Error(ErrorKind::invalid_input, "one-dimensional selection uses the beran resampling scheme");
    const BootstrapObjective obj(sample, x0, Estimator::beran, plan, grid, kernel, exec);
    BandwidthSelection sel = select_from_objective(obj, box_h, std::nullopt, strategy);
    sel.seed = plan.seed;
    sel.pilot_r = plan.pilot_r;
    return sel;
}

BandwidthSelection select_bandwidth_2d(const SurvivalSample& sample, double x0, Interval box_h, Interval box_g,
                                       const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                       const SelectionStrategy& strategy, Exec exec) {
    if (plan.scheme != ResamplingScheme::smoothed_beran)
        throw Error(ErrorKind::invalid_input, "two-dimensional selection uses the smoothed resampling scheme");
    const BootstrapObjective obj(sample, x0, Estimator::smoothed_beran, plan, grid, kernel, exec);
    BandwidthSelection sel = select_from_objective(obj, box_h, box_g, strategy);
    sel.seed = plan.seed;
    sel.pilot_r = plan.pilot_r;
    sel.pilot_s = plan.pilot_s;
    return sel;
}

} // namespace beran
