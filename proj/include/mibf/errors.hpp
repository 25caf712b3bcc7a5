#pragma once

#include <stdexcept>
#include <string>

namespace mibf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class CoincidentCoils : public Error {
public:
    using Error::Error;
};

/// Drive vector is identically zero, so the efficiency ratio is undefined.
class ZeroDrive : public Error {
public:
    using Error::Error;
};

/// Every entry of G_n collapsed below the clamp floor in an iteration.
class DegenerateIteration : public Error {
public:
    using Error::Error;
};

class AllZeroPriorities : public Error {
public:
    using Error::Error;
};

/// Scene or parameter set violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Scenario file could not be parsed. `field()` names the offending JSON path.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace mibf
