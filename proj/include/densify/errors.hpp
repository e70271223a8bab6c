#pragma once

#include <stdexcept>
#include <string>

namespace densify {

/// Input outside the mathematical domain of an operation (p = 0, target > p, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Request exceeds the limits of exact arithmetic or enumeration.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Two inputs that must describe the same scene disagree.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structured input is well-formed text but does not match the expected layout.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace densify
