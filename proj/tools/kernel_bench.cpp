// Times the serial reference formulas against the sorted-pass kernels, and the
// bootstrap objective with serial versus parallel replicate loops.
#include "beran/bandwidth.hpp"
#include "beran/estimators.hpp"
#include "beran/parallel.hpp"
#include "beran/reference.hpp"
#include "beran/simulation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>

using namespace beran;

namespace {

template <class F>
double seconds_per_call(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reference vs optimized kernel timings"};
    std::size_t n = 400;
    int B = 100, reps = 5, threads = 0;
    app.add_option("--n", n)->capture_default_str();
    app.add_option("--B", B)->capture_default_str();
    app.add_option("--reps", reps)->capture_default_str();
    app.add_option("--threads", threads)->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    set_worker_count(threads);

    const SimModel model = SimModel::make(ModelId::model1, 0.2);
    const SurvivalSample s = generate_sample(model, n, 7);
    const TimeGrid grid = model.grid(100);
    const KernelSpec kernel = model.kernel();
    const double x0 = model.x0(), h = 0.24, g = 0.08;

    std::vector<double> fast(grid.size()), ref;
    const SortedSample sorted(s);
    CurveEvaluator eval(sorted, kernel);
    const double t_ref_b = seconds_per_call([&] { ref = reference::beran_curve(s, x0, h, grid, kernel); }, reps);
    const double t_fast_b = seconds_per_call([&] { eval.beran(x0, h, grid, fast); }, reps * 100);
    double diff_b = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) diff_b = std::max(diff_b, std::abs(fast[i] - ref[i]));
    const double t_ref_s = seconds_per_call([&] { ref = reference::smoothed_curve(s, x0, h, g, grid, kernel); }, reps);
    const double t_fast_s = seconds_per_call([&] { eval.smoothed(x0, h, g, grid, fast); }, reps * 100);
    double diff_s = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) diff_s = std::max(diff_s, std::abs(fast[i] - ref[i]));

    std::printf("n=%zu n_T=%zu workers=%d\n", n, grid.size(), worker_count());
    std::printf("beran     reference %.3e s  sorted %.3e s  speedup %.1fx  max|diff| %.2e\n", t_ref_b, t_fast_b,
                t_ref_b / t_fast_b, diff_b);
    std::printf("smoothed  reference %.3e s  sorted %.3e s  speedup %.1fx  max|diff| %.2e\n", t_ref_s, t_fast_s,
                t_ref_s / t_fast_s, diff_s);

    const ResamplingPlan plan = pilot_plan(s, ResamplingScheme::smoothed_beran, B, 11, 1.5);
    const BootstrapObjective serial(s, x0, Estimator::smoothed_beran, plan, grid, kernel, Exec::serial);
    const BootstrapObjective parallel(s, x0, Estimator::smoothed_beran, plan, grid, kernel, Exec::parallel);
    double v_serial = 0.0, v_parallel = 0.0;
    const double t_serial = seconds_per_call([&] { v_serial = serial.mise({h, g}); }, reps);
    const double t_parallel = seconds_per_call([&] { v_parallel = parallel.mise({h, g}); }, reps);
    std::printf("objective serial %.3e s  parallel %.3e s  speedup %.2fx  identical %s\n", t_serial, t_parallel,
                t_serial / t_parallel, v_serial == v_parallel ? "yes" : "no");
    return 0;
}
