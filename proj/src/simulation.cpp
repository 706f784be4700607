#include "beran/simulation.hpp"

#include "beran/error.hpp"
#include "beran/rng.hpp"

#include <cmath>
#include <limits>

namespace beran {

const char* to_string(ModelId m) noexcept {
    return m == ModelId::model1 ? "model1" : "model2";
}

ModelId parse_model(const std::string& name) {
    if (name == "model1" || name == "1") return ModelId::model1;
    if (name == "model2" || name == "2") return ModelId::model2;
    throw Error(ErrorKind::invalid_input, "unknown model '" + name + "' (expected model1 or model2)");
}

SimModel SimModel::make(ModelId id, double censoring_target) {
    SimModel m;
    m.id_ = id;
    m.target_ = censoring_target;
    const bool low = std::abs(censoring_target - 0.2) < 1e-9;
    const bool high = std::abs(censoring_target - 0.5) < 1e-9;
    if (!low && !high) throw Error(ErrorKind::invalid_input, "censoring level must be 0.2 or 0.5");
    if (id == ModelId::model1)
        m.coef_ = low ? -27.0 : -22.0;
    else
        m.coef_ = low ? -113.0 / 4.0 : -55.0 / 2.0;
    return m;
}

double SimModel::lifetime_rate(double x) const noexcept {
    if (id_ == ModelId::model1) return 1.0 + 5.0 * x;
    return 2.0 + x * (58.0 + x * (-160.0 + 107.0 * x));
}

double SimModel::censoring_rate(double x) const noexcept {
    return 10.0 + coef_ * x + 20.0 * x * x;
}

double SimModel::censoring_probability(double x) const noexcept {
    // Both laws share the shape, so P(C < T) is a ratio of rates.
    const double a = lifetime_rate(x), b = censoring_rate(x);
    return b / (a + b);
}

double SimModel::true_survival(double t, double x) const noexcept {
    if (t <= 0.0) return 1.0;
    const double a = lifetime_rate(x);
    return id_ == ModelId::model1 ? std::exp(-a * t * t) : std::exp(-a * t);
}

double SimModel::quantile(double p, double x) const noexcept {
    const double cum = -std::log1p(-p);
    const double a = lifetime_rate(x);
    return id_ == ModelId::model1 ? std::sqrt(cum / a) : cum / a;
}

KernelSpec SimModel::kernel() const {
    KernelSpec k;
    k.support = support();
    return k;
}

SurvivalSample generate_sample(const SimModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorKind::invalid_input, "sample size must be positive");
    Rng rng = make_stream(seed, {0});
    std::vector<double> x(n), z(n);
    std::vector<int> d(n);
    const bool weibull = model.id() == ModelId::model1;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = uniform_open(rng);
        const double et = -std::log(uniform_open(rng)) / model.lifetime_rate(xi);
        const double ec = -std::log(uniform_open(rng)) / model.censoring_rate(xi);
        const double t = weibull ? std::sqrt(et) : et;
        const double c = weibull ? std::sqrt(ec) : ec;
        x[i] = xi;
        z[i] = std::min(t, c);
        d[i] = t <= c ? 1 : 0;
    }
    return SurvivalSample(std::move(x), std::move(z), std::move(d));
}

MonteCarloMise::MonteCarloMise(const SimModel& model, Estimator estimator, std::size_t N, std::size_t n,
                               const TimeGrid& grid, std::uint64_t seed, Exec exec)
    : x0_(model.x0()), estimator_(estimator), grid_(grid), kernel_(model.kernel()), exec_(exec) {
    if (N == 0) throw Error(ErrorKind::invalid_input, "Monte Carlo size N must be positive");
    sorted_.resize(N);
    for_each_index(N, exec, [&](std::size_t j) {
        sorted_[j] = SortedSample(generate_sample(model, n, derive_seed(seed, {j})));
    });
    truth_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) truth_[i] = model.true_survival(grid[i], x0_);
}

double MonteCarloMise::mise(const Bandwidths& bw) const {
    if (estimator_ != Estimator::kaplan_meier && !(bw.h > 0.0))
        throw Error(ErrorKind::invalid_input, "bandwidth h must be positive");
    const std::size_t nT = grid_.size();
    std::vector<double> per(sorted_.size());
    std::vector<char> ok(sorted_.size(), 1);
    for_each_index(sorted_.size(), exec_, [&](std::size_t j) {
        CurveEvaluator eval(sorted_[j], kernel_);
        std::vector<double> curve(nT);
        if (!eval.evaluate(estimator_, x0_, bw, grid_, curve)) {
            ok[j] = 0;
            return;
        }
        for (std::size_t i = 0; i < nT; ++i) curve[i] = (curve[i] - truth_[i]) * (curve[i] - truth_[i]);
        per[j] = grid_.integrate(curve);
    });
    for (char c : ok)
        if (!c) return std::numeric_limits<double>::infinity();
    return pairwise_sum(per) / static_cast<double>(per.size());
}

double MonteCarloMise::rmise(const Bandwidths& bw) const {
    return std::sqrt(mise(bw));
}

double mc_mise(const SimModel& model, Estimator estimator, const Bandwidths& bw, std::size_t N, std::size_t n,
               const TimeGrid& grid, std::uint64_t seed) {
    return MonteCarloMise(model, estimator, N, n, grid, seed).mise(bw);
}

double mc_mise(const SimModel& model,
               const std::function<std::vector<double>(const SurvivalSample&, const TimeGrid&)>& estimator,
               std::size_t N, std::size_t n, const TimeGrid& grid, std::uint64_t seed) {
    if (N == 0) throw Error(ErrorKind::invalid_input, "Monte Carlo size N must be positive");
    std::vector<double> truth(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) truth[i] = model.true_survival(grid[i], model.x0());
    std::vector<double> per(N);
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<double> curve = estimator(generate_sample(model, n, derive_seed(seed, {j})), grid);
        if (curve.size() != grid.size()) throw Error(ErrorKind::invalid_input, "estimator returned a wrong-sized curve");
        for (std::size_t i = 0; i < curve.size(); ++i) curve[i] = (curve[i] - truth[i]) * (curve[i] - truth[i]);
        per[j] = grid.integrate(curve);
    }
    return pairwise_sum(per) / static_cast<double>(N);
}

} // namespace beran
