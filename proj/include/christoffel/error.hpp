#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace christoffel {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the 0-based byte position.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An identifier that is neither a declared coordinate nor a known function.
class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(std::size_t offset, const std::string& name)
        : ParseError(offset, "unknown identifier '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Evaluation left the domain of a function (division by zero, log of a
/// non-positive number, ...). `subexpression()` is the printed offending node.
class DomainError : public Error {
public:
    DomainError(const std::string& what, const std::string& subexpression)
        : Error(what + " in '" + subexpression + "'"), subexpression_(subexpression) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

/// Jacobian determinant below the invertibility threshold.
class SingularMapError : public Error {
public:
    using Error::Error;
};

/// The supplied forward and inverse maps do not invert each other.
class InverseMismatchError : public Error {
public:
    using Error::Error;
};

/// Metric determinant below the invertibility threshold.
class SingularMetricError : public Error {
public:
    using Error::Error;
};

/// Metric components fail the symmetry check.
class AsymmetricMetricError : public Error {
public:
    using Error::Error;
};

/// Array or point dimensions disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// The coefficient constraint system has no exact solution.
class InconsistentSystemError : public Error {
public:
    using Error::Error;
};

/// Two independent metric samples disagree on the uniqueness analysis.
class GenericityError : public Error {
public:
    using Error::Error;
};

}  // namespace christoffel
