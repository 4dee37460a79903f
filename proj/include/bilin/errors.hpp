#pragma once

#include <stdexcept>
#include <string>

namespace bilin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not fit together.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An argument is outside the domain of the operation (negative entry,
/// wrong sign class, non-integer matrix, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Exact and log-domain scalars were combined in one expression.
class ModeError : public Error {
public:
    using Error::Error;
};

/// A leaf path does not address a leaf of the tree.
class PathError : public Error {
public:
    using Error::Error;
};

/// A configured size or work budget was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. `location` is a byte offset or a JSON pointer.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string location)
        : Error(what + " (at " + location + ")"), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

} // namespace bilin
