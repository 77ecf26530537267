#pragma once

#include <stdexcept>
#include <string>

namespace motionforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad argument or precondition violation (CLI exit code 1).
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// Tensor/layer shape disagreement.
class ShapeError : public ArgumentError {
public:
    explicit ShapeError(const std::string& msg) : ArgumentError(msg) {}
};

/// Malformed or unrecognized file content (CLI exit code 2).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

/// Recognized format but unsupported variant (CLI exit code 2).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

/// Failed read/write or truncated payload (CLI exit code 2).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Statistic undefined for the given input (constant data etc., CLI exit code 2).
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

/// Non-finite value where a finite one is required (CLI exit code 3).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

} // namespace motionforge
