#pragma once

#include <stdexcept>
#include <string>

namespace tempus {

// Raised when a wave packet's analytic mass is not captured by the energy
// grid (pre-normalization grid norm below the coverage threshold).
struct GridCoverageError : std::runtime_error {
    explicit GridCoverageError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a time window holds too little of the temporal probability
// for the requested claim (normalization, endpoint limits, moments).
struct WindowMassError : std::runtime_error {
    explicit WindowMassError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when two objects built on different energy grids are combined.
struct IncompatibleGridError : std::invalid_argument {
    explicit IncompatibleGridError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised by factorization routines on kernels with a negative direction.
struct NotPositiveSemidefiniteError : std::runtime_error {
    explicit NotPositiveSemidefiniteError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation requires a nonzero state (e.g. normalize).
struct DegenerateStateError : std::invalid_argument {
    explicit DegenerateStateError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised by the scenario layer on malformed configuration input.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tempus
