#pragma once

#include <stdexcept>
#include <string>

namespace riccati {

/// Base of every exception the library throws on contract violations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes disagree: non-square input, mixed dimensions, unsupported n.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// NaN or Inf entries.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Evaluation time lies outside a function's declared domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Structural requirement (Hermitian, skew-Hermitian) not met.
class StructureError : public Error {
public:
    using Error::Error;
};

/// A matrix required to be positive definite is not.
class NotPositiveDefiniteError : public Error {
public:
    NotPositiveDefiniteError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// The Hermitian eigensolver did not converge. Never folded into a PSD verdict.
class EigenSolverError : public Error {
public:
    using Error::Error;
};

/// Invalid user-facing options or schema violations.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace riccati
