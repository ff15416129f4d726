#pragma once

#include <stdexcept>
#include <string>

namespace sumrules {

/// An argument outside the domain of an operation (negative z, ell < p, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Bessel sequence does not reach the orders an evaluation needs.
class InsufficientSequence : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A Pochhammer pole or similar singularity that valid inputs never reach.
class InternalPole : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sumrules
