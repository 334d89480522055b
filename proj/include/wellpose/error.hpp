#pragma once

#include <stdexcept>
#include <string>

namespace wellpose {

/// Argument outside the mathematical domain of an operation (negative radius,
/// empty subset, non-positive scale, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// The hypothesis of a lemma or theorem checker is not met. A checker that
/// throws this has not refuted anything.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed instance or descriptor (JSON, distance matrix, dimensions).
class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(const std::string& what) : std::runtime_error(what) {}
};

/// A result failed its own replay. Signals a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace wellpose
