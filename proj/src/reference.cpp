#include "beran/reference.hpp"

#include "beran/error.hpp"

#include <algorithm>
#include <numeric>

namespace beran::reference {

std::vector<double> beran_weights(const SurvivalSample& sample, double x0, double h, const KernelSpec& kernel) {
    const std::size_t n = sample.size();
    const SurvivalSample augmented = kernel.support ? reflect_covariates(sample, *kernel.support) : sample;
    const std::size_t copies = augmented.size() / n;
    std::vector<double> w(n, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < copies; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            const double k = eval_kernel(kernel, (x0 - augmented.x()[c * n + i]) / h);
            w[i] += k;
            total += k;
        }
    }
    if (!(total > 0.0)) throw Error(ErrorKind::degenerate_weights, "all kernel weights are zero");
    for (auto& v : w) v /= total;
    return w;
}

double beran_at(const SurvivalSample& sample, std::span<const double> weights, double t) {
    const auto z = sample.z();
    const auto d = sample.delta();
    const auto x = sample.x();
    // Row j comes before row i in product-limit order: earlier time, or the
    // same time with an event ahead of a censoring, then smaller covariate.
    auto before = [&](std::size_t j, std::size_t i) {
        if (z[j] != z[i]) return z[j] < z[i];
        if (d[j] != d[i]) return d[j] > d[i];
        if (x[j] != x[i]) return x[j] < x[i];
        return j < i;
    };
    double surv = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] <= t && d[i] == 1)) continue;
        double earlier = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j)
            if (before(j, i)) earlier += weights[j];
        const double denom = 1.0 - earlier;
        if (denom <= 1e-12) {
            if (weights[i] > 1e-12) surv = 0.0;
            continue;
        }
        surv *= std::max(0.0, 1.0 - weights[i] / denom);
    }
    return surv;
}

double smoothed_at(const SurvivalSample& sample, std::span<const double> weights, double g, double t,
                   const KernelSpec& kernel) {
    std::vector<double> zs(sample.z().begin(), sample.z().end());
    std::sort(zs.begin(), zs.end());
    double prev = 1.0;
    double acc = 0.0;
    for (double zi : zs) {
        const double cur = beran_at(sample, weights, zi);
        acc += (prev - cur) * eval_integrated_kernel(kernel, (t - zi) / g);
        prev = cur;
    }
    return std::clamp(1.0 - acc, 0.0, 1.0);
}

std::vector<double> beran_curve(const SurvivalSample& sample, double x0, double h, const TimeGrid& grid,
                                const KernelSpec& kernel) {
    const auto w = beran_weights(sample, x0, h, kernel);
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = beran_at(sample, w, grid[k]);
    return out;
}

std::vector<double> smoothed_curve(const SurvivalSample& sample, double x0, double h, double g,
                                   const TimeGrid& grid, const KernelSpec& kernel) {
    const auto w = beran_weights(sample, x0, h, kernel);
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = smoothed_at(sample, w, g, grid[k], kernel);
    return out;
}

} // namespace beran::reference
