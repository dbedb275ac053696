#pragma once

#include <stdexcept>
#include <string>

namespace seasyn {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transfer function with deg(num) > deg(den) was asked for a state-space
// realization, or a generalized-plant path would be improper.
struct ImproperSystem : Error {
    using Error::Error;
};

// The feedthrough loop of an interconnection is singular (ill-posed wiring).
struct AlgebraicLoop : Error {
    using Error::Error;
};

// A system input is neither wired to a source nor exposed as an external input.
struct UnwiredInput : Error {
    using Error::Error;
};

// A requested external output does not exist among the subsystem outputs.
struct UnwiredOutput : Error {
    using Error::Error;
};

// An operation that requires a Hurwitz A matrix received an unstable one.
struct NotHurwitz : Error {
    using Error::Error;
};

// H2 norm requested for a system with nonzero feedthrough or unstable dynamics.
struct InfiniteH2Norm : Error {
    using Error::Error;
};

// A frequency grid point coincides with a pole on the imaginary axis.
struct SingularResolvent : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// The synthesis SDP admits no solution at the requested norm bounds.
struct Infeasible : Error {
    using Error::Error;
};

// Controller change-of-variables inversion is too ill-conditioned to trust.
struct RecoveryFailure : Error {
    using Error::Error;
};

struct UnstableClosedLoop : Error {
    using Error::Error;
};

// Fixed integration step too large for the closed-loop dynamics.
struct StepTooLarge : Error {
    using Error::Error;
};

// Frequency grid does not meet the density needed by a band check.
struct GridTooSparse : Error {
    using Error::Error;
};

// Experiment configuration is malformed (unknown key, bad value, ...).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace seasyn
