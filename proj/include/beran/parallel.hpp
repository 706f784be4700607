#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace beran {

/// Execution policy for the data-parallel kernels. Results never depend on it.
enum class Exec { serial, parallel };

inline void set_worker_count(int workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs body(i) for i in [0, n). Each index must write only to its own slot.
/// The exception thrown by the lowest failing index is rethrown.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::size_t failed_at = n;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(beran_for_each_failure)
            {
                if (static_cast<std::size_t>(i) < failed_at) {
                    failed_at = static_cast<std::size_t>(i);
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is the same for every worker count.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace beran
