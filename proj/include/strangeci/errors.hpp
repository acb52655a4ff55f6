#pragma once

#include <stdexcept>
#include <string>

namespace strangeci {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad prime, singular matrix, mixed fields...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class SyntaxError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class HomogeneityError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Vertex is not rational over the coefficient field of the system.
class UnsupportedVertex : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Division by zero and friends.
class ArithmeticError : public Error {
public:
    using Error::Error;
};

/// Raised when a smooth-point operation meets a singular point.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// A configured resource budget would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace strangeci
