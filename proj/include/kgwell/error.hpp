#pragma once

#include <stdexcept>
#include <string>

namespace kgwell {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A power series ran out of terms, or its argument lies outside the series regime.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Energy outside the bound-state window |E| < 1.
class OutOfWindow : public Error {
public:
    using Error::Error;
};

class NotAnEigenvalue : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class BracketInvalid : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public Error {
public:
    using Error::Error;
};

} // namespace kgwell
