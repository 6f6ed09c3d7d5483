#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spindimer {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad spin, g <= 0, empty grid, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonHermitianInput : public Error {
public:
    using Error::Error;
};

class NonPositiveTemperature : public Error {
public:
    using Error::Error;
};

class ZeroExchange : public Error {
public:
    ZeroExchange() : Error("exchange coupling J must be nonzero") {}
};

class UnitMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed input row. `line()` is 1-based and counts every physical line,
/// including the header and comments.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NonMonotonicTemperature : public Error {
public:
    NonMonotonicTemperature(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("dataset contains no data rows") {}
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace spindimer
