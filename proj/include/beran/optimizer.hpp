#pragma once

#include "beran/sample.hpp"

#include <functional>
#include <span>
#include <vector>

namespace beran {

/// Objective over a box; may return +inf where it is undefined.
using BoxObjective = std::function<double(std::span<const double>)>;

struct TracePoint {
    std::vector<double> point;
    double value = 0.0;
};

struct OptimizeResult {
    std::vector<double> argmin;
    double value = 0.0;
    std::vector<TracePoint> trace;
    int iterations = 0;
};

/// Exhaustive search on m equispaced values per coordinate, endpoints
/// included (an m^d mesh). The trace lists the mesh in row-major order.
OptimizeResult minimize_over_grid(const BoxObjective& f, std::span<const Interval> box, std::size_t m);

struct QuasiNewtonOptions {
    int starts = 5;
    double tolerance = 1e-6; // on the parameter scale
    int max_iterations = 200;
};

/// Bounded quasi-Newton (projected BFGS with central-difference gradients
/// and Armijo backtracking along the projection arc), restarted from
/// equispaced interior points of the box diagonal. Best result wins, ties go
/// to the earlier start.
OptimizeResult minimize_multistart(const BoxObjective& f, std::span<const Interval> box,
                                   const QuasiNewtonOptions& options = {});

/// Starting point k of `starts`: low + (k + 1/2) * width / starts per coordinate.
std::vector<double> multistart_point(std::span<const Interval> box, int k, int starts);

} // namespace beran
