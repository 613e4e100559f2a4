#pragma once

#include <stdexcept>

namespace qig {

// Base class for every failure this library raises on purpose, so callers
// can catch one type at the CLI boundary and map it to an exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of subdivisions before reaching tolerance.
// Usually means the integrand has a feature the caller should transform away.
struct NonConvergence : Error {
    using Error::Error;
};
using QuadratureFailure = NonConvergence;

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NegativeProbability : Error {
    using Error::Error;
};

// Derivative coupling requested across a degenerate energy pair; the
// perturbative matrix element is undefined there.
struct DegenerateCoupling : Error {
    using Error::Error;
};

struct TooManyModes : Error {
    using Error::Error;
};

// Gapless parameter point where a zero-temperature integral diverges.
struct GaplessPoint : Error {
    using Error::Error;
};

struct RootNotBracketed : Error {
    using Error::Error;
};

// det(g) below the scale-aware threshold; curvature is undefined.
struct DegenerateMetric : Error {
    using Error::Error;
};

// Crossover comparison requested but one of the line sets is empty.
struct NoLines : Error {
    using Error::Error;
};

} // namespace qig
