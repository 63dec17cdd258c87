#pragma once

#include <stdexcept>
#include <string>

namespace ricemarlin {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller supplied parameters outside an operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Compressed data (block, container or dictionary-set file) failed validation.
class CorruptData : public Error {
public:
    using Error::Error;
};

/// A dictionary could not be built for the requested parameters.
class BuildError : public Error {
public:
    using Error::Error;
};

/// An iterative computation did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace ricemarlin
