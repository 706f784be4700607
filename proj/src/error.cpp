#include "beran/error.hpp"

namespace beran {

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::schema: return "schema";
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_dataset: return "empty-dataset";
    case ErrorKind::no_events: return "no-events";
    case ErrorKind::insufficient_replicates: return "insufficient-replicates";
    case ErrorKind::degenerate_weights: return "degenerate-weights";
    case ErrorKind::degenerate_variance: return "degenerate-variance";
    case ErrorKind::selection_failed: return "selection-failed";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::degenerate_weights:
    case ErrorKind::degenerate_variance:
    case ErrorKind::selection_failed:
        return 3;
    case ErrorKind::budget_exceeded:
        return 4;
    default:
        return 2;
    }
}

} // namespace beran
