#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace gnv {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (H <= 1/2, k <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A kernel or intermediate quantity evaluated to a non-finite value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorisation failed even after the jitter ramp.
class DecompositionError : public Error {
public:
    using Error::Error;
};

/// Circulant embedding produced a significantly negative eigenvalue.
class EmbeddingError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double achieved)
        : Error(describe(what, achieved)), achieved_(achieved) {}

    double achieved_tolerance() const noexcept { return achieved_; }

private:
    static std::string describe(const std::string& what, double achieved) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", achieved);
        return what + " (achieved relative error " + buf + ")";
    }

    double achieved_;
};

/// Empirical variance of the path is not positive; the moment estimator of k is undefined.
class NonPositiveVariance : public Error {
public:
    using Error::Error;
};

/// Zero or negative denominator in the least-squares formulas.
class DegenerateDesign : public Error {
public:
    using Error::Error;
};

/// k * dt too large for the one-step recursion to be meaningful.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// Mismatched grids or array lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written; the message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent configuration (unknown keys, bad types, invalid combinations).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Too many failed replications in a Monte Carlo experiment, or an empty summary cell.
class ExperimentError : public Error {
public:
    using Error::Error;
};

}  // namespace gnv
