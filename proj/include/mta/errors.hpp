#pragma once

#include <stdexcept>
#include <string>

namespace mta {

// Thrown when an argument violates an operation's precondition
// (wrong shape, non-Hermitian input, parameter count mismatch, ...).
struct InvalidInputError : std::invalid_argument {
    explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

// Candidate state has vanishing overlap with the solution ray.
struct NonConvergenceError : std::runtime_error {
    explicit NonConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested register sizes exceed what the dense simulator is allowed to allocate.
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Random instance generation exhausted its resampling budget.
struct GenerationFailureError : std::runtime_error {
    explicit GenerationFailureError(const std::string& msg) : std::runtime_error(msg) {}
};

// Not enough data points for a requested fit.
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

// The quantity asked for is not well defined (e.g. degenerate null space).
struct AmbiguityError : std::runtime_error {
    explicit AmbiguityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mta
