#pragma once

#include <stdexcept>
#include <string>

namespace csd {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain (negative size, threshold > 1, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data is malformed or violates a structural invariant.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical routine did not reach the required accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace csd
