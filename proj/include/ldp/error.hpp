#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ldp {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or configuration value is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A coefficient evaluation produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A quadrature integrand is singular at an interior node.
class SingularIntegrandError : public Error {
 public:
  using Error::Error;
};

/// A trajectory left every finite ball (non-finite state or |x| above the
/// blow-up threshold). Carries the first offending time and grid index.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time, std::size_t index)
      : Error(what), time_(time), index_(index) {}

  double time() const noexcept { return time_; }
  std::size_t index() const noexcept { return index_; }

 private:
  double time_;
  std::size_t index_;
};

}  // namespace ldp
