#include "beran/optimizer.hpp"

#include "beran/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace beran {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_box(std::span<const Interval> box) {
    if (box.empty()) throw Error(ErrorKind::invalid_input, "empty search box");
    for (const auto& b : box)
        if (!(b.low < b.high) || !std::isfinite(b.low) || !std::isfinite(b.high))
            throw Error(ErrorKind::invalid_input, "search box needs finite bounds with low < high");
}

class Recorder {
public:
    Recorder(const BoxObjective& f, std::vector<TracePoint>& trace) : f_(f), trace_(trace) {}
    double operator()(std::span<const double> x) {
        double v = f_(x);
        if (std::isnan(v)) v = inf;
        trace_.push_back({std::vector<double>(x.begin(), x.end()), v});
        return v;
    }

private:
    const BoxObjective& f_;
    std::vector<TracePoint>& trace_;
};

struct LocalResult {
    std::vector<double> x;
    double value = inf;
    int iterations = 0;
};

LocalResult projected_bfgs(Recorder& f, std::span<const Interval> box, std::vector<double> x,
                           const QuasiNewtonOptions& opt) {
    const std::size_t d = box.size();
    // Work in unit coordinates so one tolerance fits every axis.
    std::vector<double> scale(d);
    for (std::size_t i = 0; i < d; ++i) scale[i] = box[i].width();
    const auto to_x = [&](std::span<const double> y) {
        std::vector<double> out(d);
        for (std::size_t i = 0; i < d; ++i) out[i] = box[i].clamp(box[i].low + y[i] * scale[i]);
        return out;
    };
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = std::clamp((x[i] - box[i].low) / scale[i], 0.0, 1.0);

    double tol = inf;
    for (std::size_t i = 0; i < d; ++i) tol = std::min(tol, opt.tolerance / scale[i]);
    const double fd_step = std::max(1e-5, 10.0 * tol);

    auto value = [&](std::span<const double> yy) { return f(to_x(yy)); };
    auto gradient = [&](std::span<const double> yy, double fy) {
        std::vector<double> g(d), probe(yy.begin(), yy.end());
        for (std::size_t i = 0; i < d; ++i) {
            const double up = std::min(1.0, yy[i] + fd_step), dn = std::max(0.0, yy[i] - fd_step);
            probe[i] = up;
            const double fu = up > yy[i] ? value(probe) : fy;
            probe[i] = dn;
            const double fdn = dn < yy[i] ? value(probe) : fy;
            probe[i] = yy[i];
            if (std::isfinite(fu) && std::isfinite(fdn) && up > dn)
                g[i] = (fu - fdn) / (up - dn);
            else if (std::isfinite(fu) && up > yy[i])
                g[i] = (fu - fy) / (up - yy[i]);
            else if (std::isfinite(fdn) && dn < yy[i])
                g[i] = (fy - fdn) / (yy[i] - dn);
            else
                g[i] = 0.0;
        }
        return g;
    };

    LocalResult res;
    double fy = value(y);
    if (!std::isfinite(fy)) {
        res.x = to_x(y);
        return res;
    }
    std::vector<double> g = gradient(y, fy);
    std::vector<double> H(d * d, 0.0);
    // Identity scaled so that a steepest-descent step moves a tenth of the box.
    const auto reset = [&] {
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        const double diag = gmax > 0.0 ? 0.1 / gmax : 1.0;
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) H[i * d + i] = diag;
    };
    reset();

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        // Coordinates pinned at a bound with the gradient pushing outward are frozen.
        std::vector<bool> active(d, false);
        for (std::size_t i = 0; i < d; ++i)
            active[i] = (y[i] <= 0.0 && g[i] > 0.0) || (y[i] >= 1.0 && g[i] < 0.0);
        std::vector<double> p(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            if (active[i]) continue;
            for (std::size_t j = 0; j < d; ++j)
                if (!active[j]) p[i] -= H[i * d + j] * g[j];
        }
        double slope = 0.0, pnorm = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            slope += p[i] * g[i];
            pnorm = std::max(pnorm, std::abs(p[i]));
        }
        if (slope >= 0.0) {
            reset();
            for (std::size_t i = 0; i < d; ++i) p[i] = active[i] ? 0.0 : -g[i];
            slope = 0.0;
            pnorm = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                slope += p[i] * g[i];
                pnorm = std::max(pnorm, std::abs(p[i]));
            }
        }
        if (pnorm == 0.0) break;
        // Do not step further than the unit box in one go.
        double step = pnorm > 1.0 ? 1.0 / pnorm : 1.0;
        std::vector<double> y_new(d);
        double f_new = inf;
        bool accepted = false;
        double moved = 0.0;
        for (;;) {
            moved = 0.0;
            double decrease = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                y_new[i] = std::clamp(y[i] + step * p[i], 0.0, 1.0);
                moved = std::max(moved, std::abs(y_new[i] - y[i]));
                decrease += g[i] * (y_new[i] - y[i]);
            }
            if (moved < tol) break;
            f_new = value(y_new);
            if (std::isfinite(f_new) && f_new <= fy + 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        std::vector<double> g_new = gradient(y_new, f_new);
        std::vector<double> s(d), q(d);
        double sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = y_new[i] - y[i];
            q[i] = g_new[i] - g[i];
            sq += s[i] * q[i];
        }
        const bool full_step = step == (pnorm > 1.0 ? 1.0 / pnorm : 1.0);
        if (sq <= 1e-14 * std::sqrt(std::inner_product(s.begin(), s.end(), s.begin(), 0.0) *
                                    std::inner_product(q.begin(), q.end(), q.begin(), 0.0))) {
            // No usable curvature: the model is flat or concave here, so
            // stretch the next step if this one was taken in full.
            if (full_step)
                for (auto& v : H) v *= 2.0;
        } else {
            // H <- (I - rho s q') H (I - rho q s') + rho s s'
            const double rho = 1.0 / sq;
            std::vector<double> Hq(d, 0.0);
            double qHq = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) Hq[i] += H[i * d + j] * q[j];
            for (std::size_t i = 0; i < d; ++i) qHq += q[i] * Hq[i];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    H[i * d + j] += (1.0 + rho * qHq) * rho * s[i] * s[j] - rho * (Hq[i] * s[j] + s[i] * Hq[j]);
        }
        const double gain = fy - f_new;
        y = y_new;
        fy = f_new;
        g = std::move(g_new);
        if (moved < tol || gain <= 1e-12 * std::abs(fy)) {
            ++it;
            break;
        }
    }
    res.x = to_x(y);
    res.value = fy;
    res.iterations = it;
    return res;
}

} // namespace

OptimizeResult minimize_over_grid(const BoxObjective& f, std::span<const Interval> box, std::size_t m) {
    check_box(box);
    if (m < 2) throw Error(ErrorKind::invalid_input, "grid strategy needs m >= 2");
    const std::size_t d = box.size();
    OptimizeResult out;
    out.value = inf;
    Recorder rec(f, out.trace);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    for (;;) {
        for (std::size_t i = 0; i < d; ++i)
            x[i] = idx[i] + 1 == m ? box[i].high
                                   : box[i].low + box[i].width() * static_cast<double>(idx[i]) / static_cast<double>(m - 1);
        const double v = rec(x);
        if (v < out.value) {
            out.value = v;
            out.argmin = x;
        }
        // Last coordinate runs fastest.
        std::size_t k = d;
        while (k > 0) {
            --k;
            if (++idx[k] < m) break;
            idx[k] = 0;
            if (k == 0) {
                k = d + 1;
                break;
            }
        }
        if (k == d + 1) break;
    }
    if (out.argmin.empty()) out.argmin = out.trace.front().point;
    out.iterations = static_cast<int>(out.trace.size());
    return out;
}

std::vector<double> multistart_point(std::span<const Interval> box, int k, int starts) {
    std::vector<double> x(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
        x[i] = box[i].low + (k + 0.5) * box[i].width() / starts;
    return x;
}

OptimizeResult minimize_multistart(const BoxObjective& f, std::span<const Interval> box,
                                   const QuasiNewtonOptions& options) {
    check_box(box);
    if (options.starts < 1) throw Error(ErrorKind::invalid_input, "multistart needs at least one start");
    if (!(options.tolerance > 0.0)) throw Error(ErrorKind::invalid_input, "tolerance must be positive");
    OptimizeResult out;
    out.value = inf;
    Recorder rec(f, out.trace);
    for (int k = 0; k < options.starts; ++k) {
        LocalResult local = projected_bfgs(rec, box, multistart_point(box, k, options.starts), options);
        out.iterations += local.iterations;
        if (local.value < out.value || out.argmin.empty()) {
            if (local.value < out.value) out.value = local.value;
            out.argmin = local.x;
        }
    }
    return out;
}

} // namespace beran
