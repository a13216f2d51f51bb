#pragma once

#include <stdexcept>
#include <string>

namespace p2d {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid physical or task parameters (maps to CLI exit code 2).
struct InvalidParams : Error {
    using Error::Error;
};

/// Config file syntax or schema problem, with line context when available.
struct ConfigError : Error {
    using Error::Error;
};

/// Requested peak or frequency lies outside the computed grid.
struct OutOfGrid : Error {
    using Error::Error;
};

struct UnknownPathway : Error {
    using Error::Error;
};

/// Time grid too coarse/short for the requested transform.
struct GridTooCoarse : Error {
    using Error::Error;
};

/// Numerical failures (map to CLI exit code 3).
struct NumericalError : Error {
    using Error::Error;
};

/// Right-eigenvector matrix is ill-conditioned (near an exceptional point).
struct DefectiveLiouvillian : NumericalError {
    using NumericalError::NumericalError;
};

/// Driven Liouvillian kernel has dimension > 1.
struct SteadyStateNotUnique : NumericalError {
    using NumericalError::NumericalError;
};

/// Emission drive outside the linear-response regime.
struct DriveTooStrong : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace p2d
