#pragma once

#include <stdexcept>
#include <string>

namespace beran {

enum class ErrorKind {
    invalid_input,
    schema,
    parse,
    empty_dataset,
    no_events,
    insufficient_replicates,
    degenerate_weights,
    degenerate_variance,
    selection_failed,
    budget_exceeded,
    io,
};

/// Library-wide exception. The kind selects the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// 2 for validation problems, 3 for numerical failures, 4 for budget overruns.
int exit_code(ErrorKind kind) noexcept;

} // namespace beran
