#pragma once

#include <stdexcept>

namespace maxbandit {

// Argument outside the mathematical domain of an operation (G_*(eps) = 0,
// eps > eps0, alpha out of range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed or schema-invalid input description.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A distribution that fails its structural invariants when assembled.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace maxbandit
