#pragma once

#include <stdexcept>
#include <string>

namespace fibgap {

/// Base class for all failures raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An integer quantity (a Fibonacci number, an element count) left the 64-bit range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A word or stack would exceed the configured letter cap.
class LengthCapError : public Error {
public:
    using Error::Error;
};

/// The beam element matrix is singular at this frequency (csc/cot pole or vanishing Psi_ab).
/// Sweeps catch this and re-grid or skip the point.
class BeamPoleError : public Error {
public:
    BeamPoleError(const std::string& what, double omega)
        : Error(what), omega_(omega) {}

    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

/// No growth-condition theorem covers the requested (m, l).
class UnsupportedRule : public Error {
public:
    using Error::Error;
};

/// The lower-right entry of a global transfer matrix vanished.
class DegenerateEntry : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace fibgap
