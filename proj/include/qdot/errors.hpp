#pragma once

#include <stdexcept>
#include <string>

namespace qdot {

/// Input outside the mathematical domain of an operation (r <= 0, l >= 1 for bound states, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Malformed or out-of-range argument (index past the end, inverted interval, ...).
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a trustworthy result.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qdot
