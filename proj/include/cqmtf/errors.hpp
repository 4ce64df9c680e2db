#pragma once

#include <stdexcept>
#include <string>

namespace cqmtf {

// Bad geometry / topology description.
struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the supported domain of a routine.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Something went wrong numerically (singular system, non-finite values, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cqmtf
