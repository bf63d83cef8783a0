#pragma once

#include <stdexcept>
#include <string>

namespace nsreg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: wrong sizes, exponents outside their range, malformed files.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A requested scale is below the configured resolution floor.
class ResolutionError : public ValidationError {
public:
    ResolutionError(const std::string& what, double scale)
        : ValidationError(what), scale_(scale) {}
    double scale() const noexcept { return scale_; }

private:
    double scale_;
};

/// Non-finite values, blown stability bounds, failed post-conditions.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nsreg
