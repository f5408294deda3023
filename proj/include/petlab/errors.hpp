#pragma once

#include <stdexcept>
#include <string>

namespace petlab {

// Bad input: malformed arguments, violated preconditions or hypotheses.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured budget (table size, enumeration count, memory cap) would be
// exceeded. Callers may retry with larger limits.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact integer result does not fit the machine representation.
class OverflowError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// Inputs are valid but lead to a degenerate construction (e.g. no positive
// scaling constant exists).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical guarantee the code relies on was observed to fail. Carries
// a diagnostic dump in what().
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace petlab
