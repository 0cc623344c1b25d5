#pragma once

#include <stdexcept>
#include <string>

namespace pst {

/// Root of every failure the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition. The CLI maps this to exit code 1.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computation could not produce a trustworthy number. The CLI maps this
/// to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The boundary field does not exceed the critical value, so no localized
/// level has split off from the band.
class NoBoundState : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DivisionByZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InverseIterationStalled : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The requested splitting is smaller than what the working precision can
/// resolve; rerun in extended precision.
class GapBelowResolution : public NumericalError {
 public:
  GapBelowResolution(const std::string& what, double splitting, double threshold)
      : NumericalError(what), splitting_(splitting), threshold_(threshold) {}

  double splitting() const noexcept { return splitting_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double splitting_;
  double threshold_;
};

/// Fixed-point iteration exhausted its budget. Carries the last iterate.
class NotConverged : public NumericalError {
 public:
  NotConverged(const std::string& what, double kappa_plus, double kappa_minus, double residual)
      : NumericalError(what), kappa_plus_(kappa_plus), kappa_minus_(kappa_minus), residual_(residual) {}

  double kappa_plus() const noexcept { return kappa_plus_; }
  double kappa_minus() const noexcept { return kappa_minus_; }
  double residual() const noexcept { return residual_; }

 private:
  double kappa_plus_;
  double kappa_minus_;
  double residual_;
};

class DenominatorNearZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoPeakInWindow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pst
