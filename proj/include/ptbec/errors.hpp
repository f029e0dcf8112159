#pragma once

#include <stdexcept>
#include <string>

namespace ptbec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (grid mismatch, empty input, bad config value).
class UsageError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

/// The requested stationary states do not exist at the given parameters.
class NotAvailable : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}

  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

class EigenSolverError : public Error {
 public:
  EigenSolverError(const std::string& what, int info) : Error(what), info_(info) {}

  int info() const noexcept { return info_; }

 private:
  int info_;
};

}  // namespace ptbec
