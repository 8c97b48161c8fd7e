#pragma once

#include <stdexcept>
#include <string>

namespace guideq {

/// Input outside the mathematical domain of an operation (non-positive
/// cutoff, v >= c, negative guide width, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure could not produce a trustworthy answer
/// (unresolved grid, CFL violation, root not bracketed).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input: scenario files, CSV profiles, CLI arguments.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace guideq
