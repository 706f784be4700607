#include "beran/benchmark.hpp"

#include "beran/error.hpp"
#include "beran/rng.hpp"

#include <atomic>
#include <chrono>
#include <cmath>

namespace beran {

namespace {

double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

double population_sd(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = mean_of(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return std::sqrt(mean_of(sq));
}

} // namespace

RelativeMetrics relative_metrics(std::span<const Bandwidths> selected, const Bandwidths& optimum, double rmise_opt,
                                 const std::function<double(const Bandwidths&)>& rmise) {
    if (selected.empty()) throw Error(ErrorKind::invalid_input, "no selections to summarize");
    if (!(optimum.h > 0.0) || !(rmise_opt > 0.0))
        throw Error(ErrorKind::invalid_input, "optimal bandwidth and RMISE must be positive");
    const bool two_d = optimum.g.has_value();
    RelativeMetrics m;
    std::vector<double> hs, gs, rm;
    for (const auto& s : selected) {
        hs.push_back(s.h);
        double dh = (s.h - optimum.h) / optimum.h;
        if (two_d) {
            if (!s.g) throw Error(ErrorKind::invalid_input, "selection lacks g");
            gs.push_back(*s.g);
            const double dg = (*s.g - *optimum.g) / *optimum.g;
            m.h_rel.push_back(std::hypot(dh, dg));
        } else {
            m.h_rel.push_back(std::abs(dh));
        }
        const double r = rmise(s);
        rm.push_back(r);
        m.r_rel.push_back((r - rmise_opt) / rmise_opt);
    }
    m.mean_h = mean_of(hs);
    m.sd_h = population_sd(hs);
    if (two_d) {
        m.mean_g = mean_of(gs);
        m.sd_g = population_sd(gs);
    }
    m.h_bar = mean_of(m.h_rel);
    m.mean_rmise = mean_of(rm);
    m.r_bar = mean_of(m.r_rel);
    return m;
}

double winkler_score(double lower, double upper, double truth, double alpha) {
    double ws = upper - lower;
    if (truth < lower) ws += 2.0 / alpha * (lower - truth);
    if (truth > upper) ws += 2.0 / alpha * (truth - upper);
    return ws;
}

RegionMetrics region_metrics(std::span<const ConfidenceRegion> regions, const SimModel& model, double alpha) {
    RegionMetrics out;
    out.regions = regions.size();
    if (regions.empty()) return out;
    std::vector<double> cov, pw, width, iws;
    for (const auto& r : regions) {
        const std::size_t nT = r.grid.size();
        std::size_t inside = 0;
        std::vector<double> w(nT), ws(nT);
        for (std::size_t i = 0; i < nT; ++i) {
            const double s = model.true_survival(r.grid[i], model.x0());
            inside += (r.lower[i] < s && s < r.upper[i]);
            w[i] = r.upper[i] - r.lower[i];
            ws[i] = winkler_score(r.lower[i], r.upper[i], s, alpha);
            if (ws[i] < w[i]) out.winkler_dominance = false;
        }
        cov.push_back(inside == nT ? 1.0 : 0.0);
        pw.push_back(static_cast<double>(inside) / static_cast<double>(nT));
        width.push_back(mean_of(w));
        iws.push_back(r.grid.integrate(ws));
    }
    out.coverage = mean_of(cov);
    out.pointwise_coverage = mean_of(pw);
    out.average_width = mean_of(width);
    out.iws = mean_of(iws);
    return out;
}

Interval model_box_h(const SimModel& model) {
    // spread of U(0, 1) between its 2.5% and 97.5% quantiles
    (void)model;
    return {0.05 * 0.95, 2.0 * 0.95};
}

Interval model_box_g(const SimModel& model) {
    return {0.01 * model.t_max(), model.t_max()};
}

Bandwidths mise_optimal_bandwidths(const MonteCarloMise& mc, Interval box_h, std::optional<Interval> box_g,
                                   std::size_t grid_points) {
    std::vector<Interval> box{box_h};
    if (box_g) box.push_back(*box_g);
    const bool two_d = box_g.has_value();
    const BoxObjective f = [&](std::span<const double> p) {
        return mc.mise({p[0], two_d ? std::optional<double>(p[1]) : std::nullopt});
    };
    const OptimizeResult coarse = minimize_over_grid(f, box, grid_points);
    if (!std::isfinite(coarse.value))
        throw Error(ErrorKind::selection_failed, "Monte Carlo MISE is infinite over the whole box");
    std::vector<Interval> local(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        const double cell = box[i].width() / static_cast<double>(grid_points - 1);
        local[i] = {std::max(box[i].low, coarse.argmin[i] - cell), std::min(box[i].high, coarse.argmin[i] + cell)};
    }
    QuasiNewtonOptions qn;
    qn.starts = 1;
    const OptimizeResult fine = minimize_multistart(f, local, qn);
    const auto& best = fine.value < coarse.value ? fine.argmin : coarse.argmin;
    return {best[0], two_d ? std::optional<double>(best[1]) : std::nullopt};
}

BenchReport run_benchmark(const BenchConfig& config) {
    if (config.estimator == Estimator::kaplan_meier)
        throw Error(ErrorKind::invalid_input, "the benchmark runs the beran or smoothed-beran estimator");
    if (config.N == 0 || config.n == 0 || config.B < 1 || config.n_T < 2 || config.N_mise == 0)
        throw Error(ErrorKind::invalid_input, "N, n, B, N_mise must be positive and n_T >= 2");
    if (config.regions && config.B < 2)
        throw Error(ErrorKind::insufficient_replicates, "confidence regions need B >= 2");
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    const SimModel model = SimModel::make(config.model, config.censoring);
    const TimeGrid grid = model.grid(config.n_T);
    const KernelSpec kernel = model.kernel();
    const bool smoothed = config.estimator == Estimator::smoothed_beran;
    const ResamplingScheme scheme = smoothed ? ResamplingScheme::smoothed_beran : ResamplingScheme::beran;
    const double c = config.pilot_c.value_or(model.pilot_c());

    BenchReport report;
    report.config = config;
    const MonteCarloMise mc(model, config.estimator, config.N_mise, config.n, grid, derive_seed(config.seed, {3}));
    report.mise_bandwidths =
        config.mise_bandwidths
            ? *config.mise_bandwidths
            : mise_optimal_bandwidths(mc, model_box_h(model),
                                      smoothed ? std::optional<Interval>(model_box_g(model)) : std::nullopt,
                                      config.mise_grid);
    if (smoothed && !report.mise_bandwidths.g)
        throw Error(ErrorKind::invalid_input, "smoothed benchmark needs a g bandwidth");
    report.rmise_at_optimal = mc.rmise(report.mise_bandwidths);

    std::vector<SampleOutcome> outcomes(config.N);
    std::vector<ResampleDiagnostics> diags(config.N);
    std::vector<char> done(config.N, 0);
    std::atomic<bool> over_budget{false};
    for_each_index(config.N, Exec::parallel, [&](std::size_t j) {
        if (config.budget_seconds && (over_budget.load() || elapsed() > *config.budget_seconds)) {
            over_budget = true;
            return;
        }
        const SurvivalSample sample = generate_sample(model, config.n, derive_seed(config.seed, {1, j}));
        const std::uint64_t boot_seed = derive_seed(config.seed, {2, j});
        SampleOutcome& out = outcomes[j];
        const ResamplingPlan plan = pilot_plan(sample, scheme, config.B, boot_seed, c);
        out.pilot_r = plan.pilot_r;
        out.pilot_s = plan.pilot_s;
        if (config.select) {
            const BandwidthSelection sel =
                smoothed ? select_bandwidth_2d(sample, model.x0(), default_box_h(sample), default_box_g(sample), plan,
                                               grid, kernel, config.strategy)
                         : select_bandwidth_1d(sample, model.x0(), default_box_h(sample), plan, grid, kernel,
                                               config.strategy);
            out.selected = Bandwidths{sel.h_star, sel.g_star};
            diags[j] += sel.diagnostics;
        }
        if (config.regions) {
            // Regions draw from their own stream so they do not depend on whether selection ran.
            ResamplingPlan region_plan = plan;
            region_plan.seed = derive_seed(boot_seed, {1});
            const BootstrapCurves bc = bootstrap_curves(sample, model.x0(), config.estimator, report.mise_bandwidths,
                                                        region_plan, grid, kernel);
            diags[j] += bc.diagnostics;
            try {
                out.method1 = build_method1(bc, grid, config.alpha);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::degenerate_variance) throw;
                out.region_error = e.what();
            }
            out.method2 = build_method2(bc, grid, config.alpha);
        }
        done[j] = 1;
    });

    // Aggregate the leading run of finished samples so a budget stop stays reproducible.
    std::size_t completed = 0;
    while (completed < config.N && done[completed]) ++completed;
    report.completed = completed;
    report.complete = completed == config.N;
    outcomes.resize(completed);
    for (std::size_t j = 0; j < completed; ++j) report.diagnostics += diags[j];

    if (config.select && completed > 0) {
        std::vector<Bandwidths> sel;
        for (const auto& o : outcomes) sel.push_back(*o.selected);
        report.selection = relative_metrics(sel, report.mise_bandwidths, report.rmise_at_optimal,
                                            [&](const Bandwidths& b) { return mc.rmise(b); });
    }
    if (config.regions && completed > 0) {
        std::vector<ConfidenceRegion> m1, m2;
        for (const auto& o : outcomes) {
            if (o.method1) m1.push_back(*o.method1);
            else ++report.region_failures;
            m2.push_back(*o.method2);
        }
        report.method1 = region_metrics(m1, model, config.alpha);
        report.method2 = region_metrics(m2, model, config.alpha);
    }
    report.samples = std::move(outcomes);
    return report;
}

std::vector<ScalingPoint> run_scaling_bench(ModelId model_id, double censoring, std::span<const std::size_t> sizes,
                                            int B, std::uint64_t seed, const SelectionStrategy& strategy) {
    const SimModel model = SimModel::make(model_id, censoring);
    const TimeGrid grid = model.grid(100);
    std::vector<ScalingPoint> out;
    for (std::size_t n : sizes) {
        const SurvivalSample sample = generate_sample(model, n, derive_seed(seed, {n}));
        const ResamplingPlan plan =
            pilot_plan(sample, ResamplingScheme::beran, B, derive_seed(seed, {n, 1}), model.pilot_c());
        const auto t0 = std::chrono::steady_clock::now();
        const BandwidthSelection sel = select_bandwidth_1d(sample, model.x0(), default_box_h(sample), plan, grid,
                                                           model.kernel(), strategy);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back({n, secs, sel.h_star});
    }
    return out;
}

} // namespace beran
