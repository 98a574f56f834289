#pragma once

#include <stdexcept>
#include <string>

namespace winding {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two-resolution comparison disagreed: the grid is too coarse.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// An angle path jumps by pi or more between samples.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// A construction produced (or would produce) a self-intersecting curve.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// The adjacency graph of a sampled manifold is not connected.
class ConnectivityError : public Error {
public:
    using Error::Error;
};

/// Input text could not be parsed; the message carries the line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace winding
