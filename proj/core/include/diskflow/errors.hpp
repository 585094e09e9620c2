#pragma once

#include <stdexcept>
#include <string>

namespace diskflow {

// Base class so callers can catch any library failure in one handler.
struct DiskflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lagrangian map folded over: det(dx/dy) <= 0 somewhere.
struct DegenerateMap : DiskflowError {
    using DiskflowError::DiskflowError;
};

// Tensor rank/frame mismatch between operands.
struct RankMismatch : DiskflowError {
    using DiskflowError::DiskflowError;
};

struct FrameMismatch : DiskflowError {
    using DiskflowError::DiskflowError;
};

// Iterative solve failed to reach tolerance.
struct NoConvergence : DiskflowError {
    NoConvergence(const std::string& what, int iterations_, double residual_)
        : DiskflowError(what), iterations(iterations_), residual(residual_) {}
    int iterations;
    double residual;
};

// Neumann data incompatible with the source term beyond tolerance.
struct IncompatibleNeumann : DiskflowError {
    using DiskflowError::DiskflowError;
};

// A field that must vanish on the boundary does not.
struct BoundaryNonzero : DiskflowError {
    using DiskflowError::DiskflowError;
};

struct NonpositiveKappa : DiskflowError {
    using DiskflowError::DiskflowError;
};

// e'(h) <= 0 somewhere on the sampled range for a compressible family.
struct DegenerateEos : DiskflowError {
    using DiskflowError::DiskflowError;
};

// Spectral tail of a derived field exceeds the trust threshold.
struct ResolutionInsufficient : DiskflowError {
    using DiskflowError::DiskflowError;
};

// Requested a time-derivative field beyond what was derived.
struct MissingDerivedField : DiskflowError {
    using DiskflowError::DiskflowError;
};

// Outward normal derivative of the enthalpy fails the sign condition.
struct SignConditionViolation : DiskflowError {
    SignConditionViolation(const std::string& what, double eps_)
        : DiskflowError(what), eps(eps_) {}
    double eps;
};

struct CflViolation : DiskflowError {
    using DiskflowError::DiskflowError;
};

// Successive-approximation differences grew two iterations in a row.
struct NoContraction : DiskflowError {
    using DiskflowError::DiskflowError;
};

struct InsufficientSnapshots : DiskflowError {
    using DiskflowError::DiskflowError;
};

struct ConfigError : DiskflowError {
    using DiskflowError::DiskflowError;
};

struct IoError : DiskflowError {
    using DiskflowError::DiskflowError;
};

} // namespace diskflow
