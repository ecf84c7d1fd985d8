#pragma once

#include <stdexcept>
#include <string>

namespace phyllo {

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

/// The implicit solve hit its iteration cap.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, int iterations, double residual, double time = 0.0)
        : Error(what), iterations_(iterations), residual_(residual), time_(time) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }
    /// Simulation time at which the failing step started.
    double time() const noexcept { return time_; }

private:
    int iterations_;
    double residual_;
    double time_;
};

/// No front could be located in an envelope profile.
class NoFront : public Error {
public:
    using Error::Error;
};

/// Two radial profiles have no common support after rescaling.
class NoOverlap : public Error {
public:
    using Error::Error;
};

/// A file could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A checkpoint file is truncated or fails its checksum.
class CorruptCheckpoint : public IoError {
public:
    using IoError::IoError;
};

}  // namespace phyllo
