#pragma once

#include <stdexcept>
#include <string>

namespace refla {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic contract violations.
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

// A division that the algebra promises is exact left a remainder. This
// signals a bug or a violated precondition upstream, never a data error.
struct NonExactDivision : Error {
    explicit NonExactDivision(const std::string& where)
        : Error("non-exact division in " + where) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what)
        : Error("dimension mismatch: " + what) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what) : Error("index out of range: " + what) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& what = "matrix is singular")
        : Error(what) {}
};

struct ZeroPivot : Error {
    explicit ZeroPivot(std::size_t k)
        : Error("zero pivot at elimination step " + std::to_string(k)) {}
};

struct NotSymmetric : Error {
    NotSymmetric() : Error("matrix is not symmetric") {}
};

// Update-specific failures.
struct ZeroUpdateVector : Error {
    ZeroUpdateVector() : Error("update vector is zero") {}
};

struct NoOpUpdate : Error {
    NoOpUpdate() : Error("gamma = 0 yields an unchanged matrix") {}
};

struct SingularUpdate : Error {
    explicit SingularUpdate(const std::string& what = "updated matrix is singular")
        : Error(what) {}
};

struct PermutationNotApplicable : Error {
    explicit PermutationNotApplicable(const std::string& what)
        : Error("adjacent permutation not applicable: " + what) {}
};

struct NonIntegerGamma : Error {
    NonIntegerGamma() : Error("SR1 scale is not integral; rescale the system first") {}
};

struct DegenerateDenominator : Error {
    DegenerateDenominator() : Error("SR1 denominator is zero") {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

struct OracleMismatch : Error {
    explicit OracleMismatch(const std::string& what)
        : Error("oracle mismatch: " + what) {}
};

}  // namespace refla
