#include "beran/bandwidth.hpp"
#include "beran/benchmark.hpp"
#include "beran/parallel.hpp"
#include "beran/simulation.hpp"

#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <string>

using namespace beran;

TEST_CASE("pairwise sum is exact on integers and order-stable") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("for_each_index rethrows the lowest failing index") {
    try {
        for_each_index(100, Exec::parallel, [](std::size_t i) {
            if (i == 17 || i == 80) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "17");
    }
}

TEST_CASE("results do not depend on the worker count") {
    const auto model = SimModel::make(ModelId::model1, 0.5);
    const auto s = generate_sample(model, 120, 2);
    const auto plan = pilot_plan(s, ResamplingScheme::smoothed_beran, 16, 8);
    const auto grid = model.grid(30);
    const int saved = worker_count();

    set_worker_count(1);
    const BootstrapObjective one(s, model.x0(), Estimator::smoothed_beran, plan, grid, model.kernel());
    const double m1 = one.mise(Bandwidths{0.2, 0.1});
    const auto r1 = resample(s, plan, model.kernel());
    const MonteCarloMise mc1(model, Estimator::beran, 8, 100, grid, 4);
    const double mm1 = mc1.mise(Bandwidths{0.3, {}});

    set_worker_count(4);
    const BootstrapObjective four(s, model.x0(), Estimator::smoothed_beran, plan, grid, model.kernel());
    CHECK(four.mise(Bandwidths{0.2, 0.1}) == m1);
    CHECK(resample(s, plan, model.kernel()).replicates == r1.replicates);
    const MonteCarloMise mc4(model, Estimator::beran, 8, 100, grid, 4);
    CHECK(mc4.mise(Bandwidths{0.3, {}}) == mm1);
    const BootstrapObjective serial(s, model.x0(), Estimator::smoothed_beran, plan, grid, model.kernel(),
                                    Exec::serial);
    CHECK(serial.mise(Bandwidths{0.2, 0.1}) == m1);

    set_worker_count(saved);
}
