#pragma once

#include <stdexcept>
#include <string>

namespace clf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Matrix contains NaN/Inf entries.
struct InvalidMatrix : Error {
    using Error::Error;
};

// Operand shapes are inconsistent.
struct DimensionError : Error {
    using Error::Error;
};

// Matrix expected to be symmetric positive definite is not.
struct NotSPD : Error {
    using Error::Error;
};

// The verifier returned a point already present in the counter-example set.
struct DuplicateCounterexample : Error {
    using Error::Error;
};

// Operation invoked on an object in the wrong state (e.g. extracting a
// candidate from an infeasible learner solution).
struct InvalidState : Error {
    using Error::Error;
};

// The LMI solver hit its iteration cap before reaching the target accuracy.
// Distinct from infeasibility.
struct SolverStalled : Error {
    using Error::Error;
};

// Interval set has too many uncertain entries for exhaustive enumeration.
struct TooManyVertices : Error {
    using Error::Error;
};

// Semantically invalid configuration (eta < eps, empty vertex list, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed problem/candidate file.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace clf
