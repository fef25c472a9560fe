#pragma once

#include <stdexcept>
#include <string>

namespace haar {

// Base for every validation failure raised by the library. The CLI maps these
// to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation would need a finer grid than the data carries.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// A step or box coordinate is not a multiple of the grid cell.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Parameters outside the range where an estimator or formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input that is structurally inconsistent (non-admissible orderings, bad files).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A numerically verified construction property failed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace haar
