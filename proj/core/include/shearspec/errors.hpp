#pragma once

#include <stdexcept>
#include <string>

namespace shearspec {

/// Bad user input: unknown names, out-of-range parameters, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver could not produce a trustworthy answer (singular factorization,
/// eigen-solver stagnation, too few samples for a fit).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shearspec
