#ifndef FQLAB_ERRORS_HPP
#define FQLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fqlab {

/// Mathematical precondition violated (zero coordinate, singular matrix, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact integer arithmetic left its representable range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Malformed user input (JSON schema, CLI arguments).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach its stated accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fqlab

#endif  // FQLAB_ERRORS_HPP
