#pragma once

#include "beran/estimators.hpp"
#include "beran/kernel.hpp"
#include "beran/parallel.hpp"
#include "beran/resampling.hpp"
#include "beran/sample.hpp"

#include <optional>
#include <span>
#include <vector>

namespace beran {

enum class RegionMethod { method1, method2 };
const char* to_string(RegionMethod m) noexcept;

struct ConfidenceRegion {
    TimeGrid grid;
    std::vector<double> lower;
    std::vector<double> estimate;
    std::vector<double> upper;
    RegionMethod method = RegionMethod::method1;
    Estimator estimator = Estimator::beran;
    double level = 0.95;
    double calibration = 0.0; // lambda* or rho*
    std::optional<std::vector<double>> sigma_star;
    bool degenerate = false; // no grid point with l < 1 survived the plateau fix
    Bandwidths bandwidths;
    double x0 = 0.0;
    std::uint64_t seed = 0;
    ResampleDiagnostics diagnostics;
};

/// Replicate curves stored row-major: curve k occupies [k * nT, (k + 1) * nT).
struct CurveBundle {
    std::size_t count = 0;
    std::size_t points = 0;
    std::vector<double> values;
    std::span<const double> curve(std::size_t k) const { return std::span<const double>(values).subspan(k * points, points); }
};

/// Pointwise population standard deviation across the replicates.
std::vector<double> bootstrap_sigma(const CurveBundle& curves);

/// Fraction of replicates k with |pilot(t) - S*_k(t)| <= lambda * sigma(t) at every t.
double coverage_fraction(double lambda, std::span<const double> pilot, const CurveBundle& curves,
                         std::span<const double> sigma);

struct LambdaCalibration {
    double lambda = 0.0;
    int iterations = 0;
    double coverage = 0.0;
};

/// Bisection for p(lambda) = 1 - alpha with the bracket lambda_L = 0 and
/// lambda_H doubled from 1.
LambdaCalibration calibrate_lambda(std::span<const double> pilot, const CurveBundle& curves,
                                   std::span<const double> sigma, double alpha, double zeta = 1e-4);

/// Q_(j) with j = max(1, ceil(B (1 - alpha))).
double order_statistic_radius(std::span<const double> distances, double alpha);

enum class Norm { l1, l2, sup };
/// Distance between two curves on the grid; L1 and L2 are Riemann sums.
double curve_distance(std::span<const double> a, std::span<const double> b, const TimeGrid& grid, Norm norm);
/// Whether `curve` lies in the open ball of radius rho around `center`.
bool in_ball(std::span<const double> curve, std::span<const double> center, double rho, const TimeGrid& grid,
             Norm norm);

/// Clamps to [0, 1] and widens the leading l = u = 1 stretch down to the
/// first lower value below 1.
ConfidenceRegion clamp_and_plateau_fix(ConfidenceRegion region);

/// The estimate at (h[, g]), the pilot curve at (r[, s]) and the replicate
/// curves at (h[, g]) built on B resamples of the plan.
struct BootstrapCurves {
    std::vector<double> estimate;
    std::vector<double> pilot;
    CurveBundle curves;
    ResampleDiagnostics diagnostics;
};

BootstrapCurves bootstrap_curves(const SurvivalSample& sample, double x0, Estimator estimator, const Bandwidths& bw,
                                 const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                 Exec exec = Exec::parallel);

ConfidenceRegion build_method1(const BootstrapCurves& bc, const TimeGrid& grid, double alpha, double zeta = 1e-4);
ConfidenceRegion build_method2(const BootstrapCurves& bc, const TimeGrid& grid, double alpha, Norm norm = Norm::sup);

ConfidenceRegion region_method1(const SurvivalSample& sample, double x0, Estimator estimator, const Bandwidths& bw,
                                const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                double alpha, Exec exec = Exec::parallel);
ConfidenceRegion region_method2(const SurvivalSample& sample, double x0, Estimator estimator, const Bandwidths& bw,
                                const ResamplingPlan& plan, const TimeGrid& grid, const KernelSpec& kernel,
                                double alpha, Norm norm = Norm::sup, Exec exec = Exec::parallel);

} // namespace beran
