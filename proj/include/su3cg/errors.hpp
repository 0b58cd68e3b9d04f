#pragma once

#include <stdexcept>
#include <string>

namespace su3cg {

// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

// Conjugate rationalization failed to clear the divisor's radicals.  With a
// finite set of square-root radicands this cannot happen; reaching it means a
// broken internal invariant (e.g. an unfactorable radicand slipped in).
struct DivisorNotRationalizable : Error {
    explicit DivisorNotRationalizable(const std::string& what)
        : Error("divisor not rationalizable: " + what) {}
};

struct MalformedHalfInt : Error {
    explicit MalformedHalfInt(const std::string& what)
        : Error("malformed half-integer pair: " + what) {}
};

struct NotInProduct : Error {
    explicit NotInProduct(const std::string& what)
        : Error("irrep not in tensor product: " + what) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what)
        : Error("state out of range: " + what) {}
};

struct ZeroDenominator : Error {
    explicit ZeroDenominator(const std::string& what)
        : Error("vanishing reduced matrix element in denominator: " + what) {}
};

struct MissingSource : Error {
    explicit MissingSource(const std::string& what)
        : Error("recursion source coefficient not available: " + what) {}
};

struct GradeNotZero : Error {
    explicit GradeNotZero(const std::string& what)
        : Error("closed form requires grade k = 0: " + what) {}
};

struct NonexistentTarget : Error {
    explicit NonexistentTarget(const std::string& what)
        : Error("target state does not exist: " + what) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& what)
        : Error("problem exceeds oracle size cap: " + what) {}
};

struct NotApplicable : Error {
    explicit NotApplicable(const std::string& what)
        : Error("relation not applicable: " + what) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& what)
        : Error("internal invariant violated: " + what) {}
};

}  // namespace su3cg
