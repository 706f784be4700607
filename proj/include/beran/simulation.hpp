#pragma once

#include "beran/estimators.hpp"
#include "beran/kernel.hpp"
#include "beran/parallel.hpp"
#include "beran/sample.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace beran {

enum class ModelId { model1, model2 };
const char* to_string(ModelId m) noexcept;
ModelId parse_model(const std::string& name);

/// Closed-form simulation models with X ~ U(0, 1).
///   model1: S(t|x) = exp(-A(x) t^2), censoring survival exp(-B(x) t^2),
///           A = 1 + 5x, B = 10 + d1 x + 20 x^2, d1 = -27 (0.2) or -22 (0.5).
///   model2: S(t|x) = exp(-Gamma(x) t), censoring survival exp(-Delta(x) t),
///           Gamma = 2 + 58x - 160x^2 + 107x^3, Delta = 10 + c1 x + 20 x^2,
///           c1 = -113/4 (0.2) or -55/2 (0.5).
class SimModel {
public:
    /// censoring_target is 0.2 or 0.5.
    static SimModel make(ModelId id, double censoring_target);

    ModelId id() const noexcept { return id_; }
    double censoring_target() const noexcept { return target_; }
    /// d1 for model1, c1 for model2.
    double coefficient() const noexcept { return coef_; }
    double x0() const noexcept { return id_ == ModelId::model1 ? 0.6 : 0.8; }
    /// Pilot constant c used with this model.
    double pilot_c() const noexcept { return id_ == ModelId::model1 ? 1.5 : 1.0; }
    Interval support() const noexcept { return {0.0, 1.0}; }

    double lifetime_rate(double x) const noexcept;
    double censoring_rate(double x) const noexcept;
    double censoring_probability(double x) const noexcept;
    double true_survival(double t, double x) const noexcept;
    /// Conditional quantile F^{-1}(p | x).
    double quantile(double p, double x) const noexcept;
    /// F^{-1}(0.95 | x0).
    double t_max() const noexcept { return quantile(0.95, x0()); }

    TimeGrid grid(std::size_t n_points) const { return TimeGrid::uniform(t_max(), n_points); }
    /// Default kernel with reflection on the covariate support.
    KernelSpec kernel() const;

private:
    ModelId id_ = ModelId::model1;
    double target_ = 0.2;
    double coef_ = -27.0;
};

SurvivalSample generate_sample(const SimModel& model, std::size_t n, std::uint64_t seed);

/// Monte Carlo MISE over N samples generated once (sample j from the stream
/// derive_seed(seed, {j})); every bandwidth is scored on the same samples.
class MonteCarloMise {
public:
    MonteCarloMise(const SimModel& model, Estimator estimator, std::size_t N, std::size_t n, const TimeGrid& grid,
                   std::uint64_t seed, Exec exec = Exec::parallel);
    /// (1/N) sum_j integral (S_j - S)^2; +inf on degenerate weights.
    double mise(const Bandwidths& bw) const;
    double rmise(const Bandwidths& bw) const;
    std::span<const double> truth() const noexcept { return truth_; }
    std::size_t samples() const noexcept { return sorted_.size(); }

private:
    std::vector<SortedSample> sorted_;
    std::vector<double> truth_;
    double x0_;
    Estimator estimator_;
    TimeGrid grid_;
    KernelSpec kernel_;
    Exec exec_;
};

double mc_mise(const SimModel& model, Estimator estimator, const Bandwidths& bw, std::size_t N, std::size_t n,
               const TimeGrid& grid, std::uint64_t seed);
/// Same with an arbitrary curve estimator applied to each sample.
double mc_mise(const SimModel& model,
               const std::function<std::vector<double>(const SurvivalSample&, const TimeGrid&)>& estimator,
               std::size_t N, std::size_t n, const TimeGrid& grid, std::uint64_t seed);

} // namespace beran
