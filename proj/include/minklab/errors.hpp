#pragma once

#include <stdexcept>
#include <string>

namespace minklab {

// Failure classes. The CLI maps ValidationError subclasses to exit code 2
// and FeasibilityError subclasses to exit code 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateBasis : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotUnimodular : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionTooLarge : public FeasibilityError {
 public:
  using FeasibilityError::FeasibilityError;
};

class EnumerationBudgetExceeded : public FeasibilityError {
 public:
  using FeasibilityError::FeasibilityError;
};

}  // namespace minklab
