#pragma once

#include <stdexcept>
#include <string>

namespace effsize {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An argument is outside the mathematical domain of the operation
// (non-positive degrees of freedom, alpha outside (0,1), ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// The input data make the statistic undefined (both variances zero,
// zero control variance, ...).
class DegenerateInputError : public Error {
  public:
    using Error::Error;
};

// A root search could not bracket or locate its target.
class SearchFailureError : public Error {
  public:
    using Error::Error;
};

// Malformed textual input; the message carries the row/column position.
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace effsize
