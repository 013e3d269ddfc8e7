#pragma once

#include <stdexcept>
#include <string>

namespace specvol {

/// A parameter is outside its admissible range or not finite.
class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A function was evaluated where it is undefined (e.g. a zero model spectrum).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Structural invariant broken by the caller (length mismatch, bad grid).
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Malformed experiment configuration or input file.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace specvol
