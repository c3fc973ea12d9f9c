#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

/// Argument outside the mathematical domain of an operation (out-of-radius
/// evaluation, negative degree, |j| > N, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Input that makes a measured quantity meaningless (zero function, all
/// cells excluded, vanishing half-disc maximum).
class DegenerateInputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Request beyond what the numerical pipeline can represent.
class CapabilityError : public std::runtime_error {
public:
  CapabilityError(const std::string& what, int largest_supported)
      : std::runtime_error(what), largest_supported_(largest_supported) {}
  int largest_supported() const noexcept { return largest_supported_; }

private:
  int largest_supported_;
};

class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace nodal
