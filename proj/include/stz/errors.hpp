#pragma once

#include <stdexcept>
#include <string>

namespace stz {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct ParameterError : Error {
    using Error::Error;
};

// Singular points, non-interior points and points handed to the wrong domain.
struct DomainError : Error {
    using Error::Error;
};

struct BranchError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double delta) : Error(what), last_delta(delta) {}
    double last_delta;
};

} // namespace stz
