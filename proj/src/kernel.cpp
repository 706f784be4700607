#include "beran/kernel.hpp"

#include "beran/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace beran {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Quintic Hermite table of the standard normal cdf on [-kTableEdge, kTableEdge].
// Beyond the edge the cdf is 0 or 1 to within 1e-19.
constexpr double kTableEdge = 9.0;
constexpr int kStepsPerUnit = 64;
constexpr int kIntervals = static_cast<int>(2 * kTableEdge) * kStepsPerUnit;

struct NormalCdfTable {
    std::vector<std::array<double, 6>> coef;

    NormalCdfTable() : coef(kIntervals) {
        const double h = 1.0 / kStepsPerUnit;
        for (int j = 0; j < kIntervals; ++j) {
            const double a = -kTableEdge + j * h;
            const double b = a + h;
            const double f0 = standard_normal_cdf(a);
            const double f1 = standard_normal_cdf(b);
            const double d0 = h * standard_normal_pdf(a);
            const double d1 = h * standard_normal_pdf(b);
            const double e0 = h * h * (-a * standard_normal_pdf(a));
            const double e1 = h * h * (-b * standard_normal_pdf(b));
            const double A = f1 - f0 - d0 - 0.5 * e0;
            const double B = d1 - d0 - e0;
            const double C = e1 - e0;
            coef[j] = {f0, d0, 0.5 * e0, 10.0 * A - 4.0 * B + 0.5 * C, -15.0 * A + 7.0 * B - C,
                       6.0 * A - 3.0 * B + 0.5 * C};
        }
    }

    double operator()(double u) const noexcept {
        if (u <= -kTableEdge) return 0.0;
        if (u >= kTableEdge) return 1.0;
        const double pos = (u + kTableEdge) * kStepsPerUnit;
        int j = static_cast<int>(pos);
        if (j >= kIntervals) j = kIntervals - 1;
        const double s = pos - j;
        const auto& c = coef[j];
        return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
    }
};

const NormalCdfTable& normal_cdf_table() {
    static const NormalCdfTable table;
    return table;
}

} // namespace

void KernelSpec::validate() const {
    if (!(truncation.low < truncation.high))
        throw Error(ErrorKind::invalid_input, "kernel truncation range must satisfy low < high");
    if (!(truncation.low < 0.0 && truncation.high > 0.0))
        throw Error(ErrorKind::invalid_input, "kernel truncation range must contain 0");
    if (support && !(support->low < support->high))
        throw Error(ErrorKind::invalid_input, "covariate support must satisfy low < high");
}

double standard_normal_pdf(double u) noexcept {
    return kInvSqrt2Pi * std::exp(-0.5 * u * u);
}

double standard_normal_cdf(double u) noexcept {
    return 0.5 * std::erfc(-u * kInvSqrt2);
}

double eval_kernel(const KernelSpec& spec, double u) noexcept {
    if (u <= spec.truncation.low || u >= spec.truncation.high) return 0.0;
    const double mass = standard_normal_cdf(spec.truncation.high) - standard_normal_cdf(spec.truncation.low);
    return standard_normal_pdf(u) / mass;
}

double eval_integrated_kernel(const KernelSpec& spec, double t) noexcept {
    if (t <= spec.truncation.low) return 0.0;
    if (t >= spec.truncation.high) return 1.0;
    const double lo = standard_normal_cdf(spec.truncation.low);
    const double mass = standard_normal_cdf(spec.truncation.high) - lo;
    const double v = (standard_normal_cdf(t) - lo) / mass;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

IntegratedKernel::IntegratedKernel(const KernelSpec& spec)
    : lo_(spec.truncation.low), hi_(spec.truncation.high) {
    cdf_lo_ = standard_normal_cdf(lo_);
    inv_mass_ = 1.0 / (standard_normal_cdf(hi_) - cdf_lo_);
    (void)normal_cdf_table();
    saturated_low_ = lo_ > -kTableEdge ? lo_ : -kTableEdge;
    const double edge = hi_ < kTableEdge ? hi_ : kTableEdge;
    saturated_high_ = (*this)(edge) == 1.0 ? edge : hi_;
}

double IntegratedKernel::operator()(double t) const noexcept {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    const double v = (normal_cdf_table()(t) - cdf_lo_) * inv_mass_;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double covariate_kernel(const KernelSpec& spec, double x0, double xi, double h) noexcept {
    // The normalizing constant cancels in every weight ratio.
    const auto shape = [&](double u) {
        return (u <= spec.truncation.low || u >= spec.truncation.high) ? 0.0 : std::exp(-0.5 * u * u);
    };
    double k = shape((x0 - xi) / h);
    if (spec.support) {
        k += shape((x0 - (2.0 * spec.support->low - xi)) / h);
        k += shape((x0 - (2.0 * spec.support->high - xi)) / h);
    }
    return k;
}

SurvivalSample reflect_covariates(const SurvivalSample& sample, Interval support) {
    if (!(support.low < support.high))
        throw Error(ErrorKind::invalid_input, "support must satisfy low < high");
    const std::size_t n = sample.size();
    std::vector<double> x(3 * n), z(3 * n);
    std::vector<int> d(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = sample.x()[i];
        if (xi < support.low || xi > support.high)
            throw Error(ErrorKind::invalid_input, "covariate outside the declared support at row " + std::to_string(i));
        x[i] = xi;
        x[n + i] = 2.0 * support.low - xi;
        x[2 * n + i] = 2.0 * support.high - xi;
        for (std::size_t c = 0; c < 3; ++c) {
            z[c * n + i] = sample.z()[i];
            d[c * n + i] = sample.delta()[i];
        }
    }
    return SurvivalSample(std::move(x), std::move(z), std::move(d));
}

} // namespace beran
