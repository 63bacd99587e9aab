#pragma once

#include <stdexcept>
#include <string>

namespace actlab {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear algebra kernel.
struct DimensionMismatch : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// Plant assembly.
struct OutOfDomain : Error { using Error::Error; };

// Riccati / Lyapunov solvers.
struct SingularLyapunov : Error { using Error::Error; };
struct NotStabilizable : Error { using Error::Error; };

// Training.
struct ShapeMismatch : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };

// Saddle-point solvers.
struct NonFiniteIterate : Error { using Error::Error; };
struct NonFiniteWeight : Error { using Error::Error; };

// Time integration.
struct NonFiniteState : Error { using Error::Error; };

// Configuration and argument validation.
struct ConfigError : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };

// File reads/writes.
struct IoError : Error { using Error::Error; };

}  // namespace actlab
