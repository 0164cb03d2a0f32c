#pragma once

#include <stdexcept>
#include <string>

namespace wcpmem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its allowed domain.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Two objects that must agree in size (matrix dimensions, grids) do not.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The adaptive integrator could not advance (step underflow, step budget,
/// non-finite state) or a monitored invariant broke beyond its gate.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// A requested computation would not fit into the configured memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent run configuration / input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace wcpmem
