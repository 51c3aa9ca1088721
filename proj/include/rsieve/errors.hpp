#pragma once

#include <stdexcept>
#include <string>

namespace rsieve {

// Exception hierarchy. The CLI maps each family onto an exit code:
// InputError/ParameterError -> 1, IntegrityError -> 3.

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input data (files, encodings, points).
class InputError : public Error {
   public:
    using Error::Error;
};

/// Parameter combination violating a documented precondition.
class ParameterError : public Error {
   public:
    using Error::Error;
};

class DivisionByZero : public Error {
   public:
    DivisionByZero() : Error("division by zero") {}
};

/// A computation would exceed a configured desk-scale cap.
class ResourceError : public Error {
   public:
    using Error::Error;
};

/// An exact re-check disagreed with a recorded result.
class IntegrityError : public Error {
   public:
    using Error::Error;
};

}  // namespace rsieve
