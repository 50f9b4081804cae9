#pragma once

#include <stdexcept>
#include <string>

namespace sfd {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certified decision (sign, comparison, integer bracket) could not be made
// at the precision cap. Callers must treat this as "indeterminate", never as
// a silent answer.
struct PrecisionExhausted : Error {
    using Error::Error;
};

// Thrown internally by interval operations when an enclosure is too wide to
// decide (divisor straddles zero, argument box touches the branch cut, ...).
// Precision ladders catch it and retry at higher precision.
struct Indeterminate : Error {
    using Error::Error;
};

struct InversionOfZero : Error {
    using Error::Error;
};

// Extended gcd against the minimal polynomial exposed a zero divisor, i.e.
// the input minimal polynomial is reducible.
struct NonInvertible : Error {
    using Error::Error;
};

struct InvalidFieldSpec : Error {
    using Error::Error;
};

struct UnitsNotIndependent : Error {
    using Error::Error;
};

struct UnitNotTotallyPositive : Error {
    using Error::Error;
};

struct BadSectorCount : Error {
    using Error::Error;
};

struct TwisterSearchFailed : Error {
    using Error::Error;
};

struct SingularCone : Error {
    using Error::Error;
};

struct PointOutsideComplex : Error {
    using Error::Error;
};

struct AmbiguousBarycentric : Error {
    using Error::Error;
};

struct UnstableBound : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

} // namespace sfd
