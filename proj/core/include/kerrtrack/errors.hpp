#pragma once

#include <stdexcept>
#include <string>

namespace kerrtrack {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined
/// (broken normalization, angle chart at a pole, singular target, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The integrator could not advance; carries the dimensionless time reached.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double failing_time)
      : Error(what), failing_time_(failing_time) {}

  double failing_time() const noexcept { return failing_time_; }

 private:
  double failing_time_;
};

/// Crossing scan could not match roots between consecutive samples.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kerrtrack
