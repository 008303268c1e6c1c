#pragma once

#include <stdexcept>

namespace wpcn {

/// A NetworkConfig (or a value destined for one) violates an invariant.
class InvalidConfig : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (rank, probability, distance).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class McBudgetExceeded : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Jain's index of an all-zero rate vector.
class UndefinedIndex : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace wpcn
