#pragma once

#include <stdexcept>
#include <string>

namespace swfde {

/// Mismatched or non-square matrix/vector shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside its admissible range (empty lists, non-positive rates, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A black-box mode was used for certification without declared (Ahat, Vhat).
class MissingBoundsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operation does not apply to this class of system (e.g. positivity of a
/// time-varying or nonlinear mode).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Candidate certificate does not satisfy the strict inequality it is supposed to.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input document; the message names the offending field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrator detected a non-finite state or a state beyond the blow-up threshold.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace swfde
