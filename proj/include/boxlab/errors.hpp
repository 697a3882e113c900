#pragma once

#include <stdexcept>
#include <string>

namespace boxlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A probability entry below -tol.
struct NegativeProbability : Error {
    using Error::Error;
};

// A conditional-distribution row whose sum deviates from 1 beyond tolerance.
struct NotNormalized : Error {
    using Error::Error;
};

// Mixing weights that are negative, of mismatched length, or do not sum to 1.
struct BadWeights : Error {
    using Error::Error;
};

// Malformed or wrong-arity box/report text.
struct ParseError : Error {
    using Error::Error;
};

// Vertex enumeration requested for a class that has no direct vertex set.
struct UnsupportedClass : Error {
    using Error::Error;
};

// An LP certificate failed its own re-verification; never reported as a
// silent verdict.
struct NumericalFailure : Error {
    using Error::Error;
};

// Membership verdicts violated the class inclusion ordering.
struct HierarchyInconsistency : Error {
    using Error::Error;
};

}  // namespace boxlab
