#include "beran/bandwidth.hpp"
#include "beran/error.hpp"
#include "beran/optimizer.hpp"
#include "beran/simulation.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace beran;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

SurvivalSample with_events(std::vector<double> x, std::vector<double> z, std::size_t events) {
    std::vector<int> d(z.size(), 0);
    REQUIRE(events <= z.size());
    for (std::size_t i = 0; i < events; ++i) d[i] = 1;
    return {std::move(x), std::move(z), std::move(d)};
}

struct HandFixture {
    SurvivalSample sample{{0.5, 0.5, 0.5}, {1.0, 2.0, 3.0}, {1, 0, 1}};
    std::vector<SurvivalSample> replicates{SurvivalSample({0.5, 0.5, 0.5}, {1.0, 1.0, 3.0}, {1, 1, 1}),
                                           SurvivalSample({0.5, 0.5, 0.5}, {2.0, 3.0, 3.0}, {1, 0, 1})};
    TimeGrid grid{{0.5, 1.5, 2.5, 3.5}};
};

} // namespace

TEST_CASE("pilot bandwidths") {
    const auto x = linspace(0.0, 1.0, 101);
    const auto s = with_events(x, linspace(0.1, 5.0, 101), 64);
    CHECK(central_spread(x) == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(pilot_r(s) == doctest::Approx(0.178125).epsilon(1e-13));
    CHECK(pilot_r(s, 1.0) == doctest::Approx(0.11875).epsilon(1e-13));

    const auto x2 = linspace(0.0, 1.0, 201);
    const auto z = linspace(0.0, 2.0, 201);
    const auto t = with_events(x2, z, 128);
    CHECK(pilot_s(t) == doctest::Approx(0.75 * 1.9 * 0.5).epsilon(1e-13));
    auto z2 = z;
    for (auto& v : z2) v *= 2.0;
    const auto t2 = with_events(x2, z2, 128);
    CHECK(pilot_s(t2) == doctest::Approx(2.0 * pilot_s(t)).epsilon(1e-14));

    const auto none = with_events(x2, z, 0);
    try {
        pilot_r(none);
        FAIL("expected no_events");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::no_events);
    }
    CHECK_THROWS_AS(pilot_s(none), Error);

    const auto bh = default_box_h(s);
    CHECK(bh.low == doctest::Approx(0.05 * 0.95));
    CHECK(bh.high == doctest::Approx(2.0 * 0.95));
    const auto plan = pilot_plan(t, ResamplingScheme::smoothed_beran, 10, 4);
    CHECK(plan.pilot_s.has_value());
    CHECK(plan.B == 10);
    CHECK(!pilot_plan(t, ResamplingScheme::beran, 10, 4).pilot_s.has_value());
}

TEST_CASE("bootstrap MISE on a hand fixture") {
    HandFixture f;
    const std::vector<double> pilot{1.0, 2.0 / 3.0, 2.0 / 3.0, 0.0};
    const BootstrapObjective obj(f.replicates, pilot, 0.5, Estimator::beran, f.grid, KernelSpec{});
    CHECK(obj.replicates() == 2);
    CHECK(obj.mise(Bandwidths{0.3, {}}) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(obj.mse_at(1, Bandwidths{0.3, {}}) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(obj.mse_at(0, Bandwidths{0.3, {}}) == 0.0);
    CHECK(obj.mse_at(3, Bandwidths{0.3, {}}) == doctest::Approx(1.0 / 18.0).epsilon(1e-14));

    // the smoothed estimator at g: S(t) = 1 - sum of drops times Phi((t - z)/g)
    const double g = 0.4;
    const std::vector<std::vector<std::pair<double, double>>> drops{{{1.0, 2.0 / 3.0}, {3.0, 1.0 / 3.0}},
                                                                    {{2.0, 1.0 / 3.0}, {3.0, 1.0 / 3.0}}};
    const BootstrapObjective obj2(f.replicates, pilot, 0.5, Estimator::smoothed_beran, f.grid, KernelSpec{});
    double expect = 0.0;
    for (const auto& rep : drops) {
        double integral = 0.0;
        double prev = 0.0;
        for (std::size_t k = 0; k < f.grid.size(); ++k) {
            double s = 1.0;
            for (auto [z, m] : rep) s -= m * oracle::normal_cdf((f.grid[k] - z) / g);
            integral += (f.grid[k] - prev) * (s - pilot[k]) * (s - pilot[k]);
            prev = f.grid[k];
        }
        expect += integral / 2.0;
    }
    CHECK(obj2.mise(Bandwidths{0.3, g}) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("bootstrap objective uses common random numbers") {
    const auto model = SimModel::make(ModelId::model1, 0.2);
    const auto s = generate_sample(model, 80, 5);
    const auto plan = pilot_plan(s, ResamplingScheme::beran, 20, 17);
    const auto grid = model.grid(30);
    const BootstrapObjective a(s, model.x0(), Estimator::beran, plan, grid, model.kernel(), Exec::serial);
    const BootstrapObjective b(s, model.x0(), Estimator::beran, plan, grid, model.kernel(), Exec::parallel);
    for (double h : {0.05, 0.2, 0.7}) {
        CHECK(a.mise(Bandwidths{h, {}}) == a.mise(Bandwidths{h, {}}));
        CHECK(a.mise(Bandwidths{h, {}}) == b.mise(Bandwidths{h, {}}));
    }
    CHECK(bootstrap_mise_1d(s, model.x0(), 0.2, plan, grid, model.kernel()) == a.mise(Bandwidths{0.2, {}}));

    // explicit replicates from the same plan give the same objective
    const auto set = resample(s, plan, model.kernel());
    const auto pilot = estimate_curve(s, Estimator::beran, model.x0(), Bandwidths{plan.pilot_r, {}}, grid,
                                      model.kernel());
    const BootstrapObjective c(set.replicates, pilot.values, model.x0(), Estimator::beran, grid, model.kernel());
    CHECK(c.mise(Bandwidths{0.2, {}}) == a.mise(Bandwidths{0.2, {}}));
    CHECK(std::equal(pilot.values.begin(), pilot.values.end(), a.pilot_curve().begin()));
}

TEST_CASE("pointwise bootstrap MSE") {
    const auto model = SimModel::make(ModelId::model1, 0.2);
    const auto s = generate_sample(model, 60, 8);
    const auto plan = pilot_plan(s, ResamplingScheme::beran, 15, 2);
    const double t0 = 0.9;
    const double v = bootstrap_mse_pointwise(s, model.x0(), t0, Bandwidths{0.2, {}}, plan, model.kernel());
    const BootstrapObjective obj(s, model.x0(), Estimator::beran, plan, TimeGrid({t0, t0 + 1.0}), model.kernel());
    CHECK(v == obj.mse_at(0, Bandwidths{0.2, {}}));
    CHECK(v >= 0.0);
}

TEST_CASE("optimizer on closed-form objectives") {
    const std::vector<Interval> box1{{0.0, 1.0}};
    const auto parabola = [](std::span<const double> p) { return (p[0] - 0.3) * (p[0] - 0.3); };
    const auto g = minimize_over_grid(parabola, box1, 11);
    CHECK(g.argmin[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(g.trace.size() == 11);
    const auto q = minimize_multistart(parabola, box1);
    CHECK(q.argmin[0] == doctest::Approx(0.3).epsilon(1e-5));

    const std::vector<Interval> box2{{0.0, 1.0}, {0.0, 2.0}};
    const auto separable = [](std::span<const double> p) {
        return (p[0] - 0.2) * (p[0] - 0.2) + 3.0 * (p[1] - 0.7) * (p[1] - 0.7);
    };
    const auto r = minimize_multistart(separable, box2);
    CHECK(r.argmin[0] == doctest::Approx(0.2).epsilon(1e-4));
    CHECK(r.argmin[1] == doctest::Approx(0.7).epsilon(1e-4));
    const auto m = minimize_over_grid(separable, box2, 5);
    CHECK(m.trace.size() == 25);
    CHECK(m.argmin[0] == doctest::Approx(0.25));
    CHECK(m.argmin[1] == doctest::Approx(0.5));

    // minimum outside the box lands on the bound
    const auto outside = [](std::span<const double> p) { return (p[0] + 1.0) * (p[0] + 1.0); };
    const auto b = minimize_multistart(outside, box1);
    CHECK(b.argmin[0] == doctest::Approx(0.0).epsilon(1e-9));
    for (const auto& tp : b.trace) CHECK((tp.point[0] >= 0.0 && tp.point[0] <= 1.0));

    const auto start = multistart_point(box2, 0, 5);
    CHECK(start[0] == doctest::Approx(0.1));
    CHECK(start[1] == doctest::Approx(0.2));

    // infinite regions are avoided
    const auto holes = [](std::span<const double> p) {
        return p[0] < 0.15 ? std::numeric_limits<double>::infinity() : (p[0] - 0.5) * (p[0] - 0.5);
    };
    CHECK(minimize_multistart(holes, box1).argmin[0] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("grid and quasi-newton selections agree") {
    const auto model = SimModel::make(ModelId::model1, 0.2);
    const auto s = generate_sample(model, 100, 21);
    const auto plan = pilot_plan(s, ResamplingScheme::beran, 30, 9);
    const auto grid = model.grid(40);
    const BootstrapObjective obj(s, model.x0(), Estimator::beran, plan, grid, model.kernel());
    const Interval box{0.02, 1.0};
    SelectionStrategy gs;
    gs.kind = SelectionStrategy::Kind::grid;
    gs.m = 50;
    const auto a = select_from_objective(obj, box, std::nullopt, gs);
    const auto b = select_from_objective(obj, box, std::nullopt, SelectionStrategy{});
    const double cell = box.width() / static_cast<double>(gs.m - 1);
    CHECK((std::abs(a.h_star - b.h_star) <= cell || b.objective <= a.objective));
    CHECK(box.contains(a.h_star));
    CHECK(box.contains(b.h_star));
    CHECK(b.objective == obj.mise(Bandwidths{b.h_star, {}}));
    CHECK(!b.g_star.has_value());
    CHECK(!b.trace.empty());

    const auto sel = select_bandwidth_1d(s, model.x0(), box, plan, grid, model.kernel());
    CHECK(sel.h_star == b.h_star);
    CHECK(sel.B == 30);
    CHECK(sel.seed == 9);
}

TEST_CASE("two-dimensional selection stays in its box") {
    const auto model = SimModel::make(ModelId::model1, 0.2);
    const auto s = generate_sample(model, 60, 4);
    const auto plan = pilot_plan(s, ResamplingScheme::smoothed_beran, 10, 1);
    const auto grid = model.grid(25);
    const Interval bh{0.05, 1.0}, bg{0.02, 1.5};
    SelectionStrategy gs;
    gs.kind = SelectionStrategy::Kind::grid;
    gs.m = 12;
    const auto a = select_bandwidth_2d(s, model.x0(), bh, bg, plan, grid, model.kernel(), gs);
    const auto b = select_bandwidth_2d(s, model.x0(), bh, bg, plan, grid, model.kernel());
    REQUIRE(a.g_star.has_value());
    REQUIRE(b.g_star.has_value());
    CHECK(a.trace.size() == 144);
    CHECK(bh.contains(b.h_star));
    CHECK(bg.contains(*b.g_star));
    const double ch = bh.width() / 11.0, cg = bg.width() / 11.0;
    CHECK(((std::abs(a.h_star - b.h_star) <= ch && std::abs(*a.g_star - *b.g_star) <= cg) ||
           b.objective <= a.objective));
}

TEST_CASE("riemann sums converge on a smooth integrand") {
    double prev = 1.0;
    for (std::size_t n : {10u, 100u, 1000u}) {
        const auto g = TimeGrid::uniform(1.0, n);
        std::vector<double> f(n);
        for (std::size_t k = 0; k < n; ++k) f[k] = g[k] * g[k];
        const double err = std::abs(g.integrate(f) - 1.0 / 3.0);
        CHECK(err < prev / 5.0);
        prev = err;
    }
}

TEST_CASE("selection reports degenerate objectives") {
    HandFixture f;
    const std::vector<double> pilot{1.0, 2.0 / 3.0, 2.0 / 3.0, 0.0};
    const BootstrapObjective obj(f.replicates, pilot, 50.0, Estimator::beran, f.grid, KernelSpec{});
    CHECK(std::isinf(obj.mise(Bandwidths{0.01, {}})));
    try {
        select_from_objective(obj, {0.001, 0.01}, std::nullopt, SelectionStrategy{});
        FAIL("expected selection_failed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::selection_failed);
    }
}
