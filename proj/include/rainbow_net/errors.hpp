#pragma once

#include <stdexcept>
#include <string>

namespace rnf {

/// Malformed input document (JSON syntax, missing field, wrong type).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Description set that cannot be decoded consistently.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive search would exceed its candidate budget.
class InstanceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rnf
