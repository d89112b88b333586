#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace expfam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (natural domain, mean
/// domain, hyperparameter positivity, level in (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An observation point lies outside the support of the family.
class SupportError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure exhausted its budget without meeting tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double value, double error_estimate,
                 std::size_t evaluations)
      : Error(what + " (value=" + std::to_string(value) +
              ", error_estimate=" + std::to_string(error_estimate) +
              ", evaluations=" + std::to_string(evaluations) + ")"),
        value_(value),
        error_estimate_(error_estimate),
        evaluations_(evaluations) {}
  explicit NonConvergence(const std::string& what) : Error(what) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_estimate_; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  double value_ = 0.0;
  double error_estimate_ = 0.0;
  std::size_t evaluations_ = 0;
};

/// Root finding was given an interval without a sign change.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

/// An integral over an unbounded domain keeps growing as the domain grows.
class NonIntegrable : public NonConvergence {
 public:
  using NonConvergence::NonConvergence;
};

/// The CNML denominator diverges: the predictor is undefined for this prefix.
class NonNormalizable : public Error {
 public:
  using Error::Error;
};

/// The posterior under the (improper) prior fails to normalize.
class ImproperPosterior : public Error {
 public:
  using Error::Error;
};

/// Every observation sits on the boundary of the mean domain (e.g. all
/// Poisson-exponential observations equal to 0), so the MLE does not exist.
class DegenerateData : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace expfam
