#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace geomix {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or kinds do not line up (payload length, mismatched spaces, dimensions).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A result would leave the space (non-monotone quantiles, leaving the PD cone,
/// non-unique sphere geodesic).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Sum of Fréchet weights is not positive.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

/// Predictor design with singular covariance. Carries offending subject ids
/// when raised from the per-subject fitting step.
class DegenerateDesignError : public Error {
 public:
  explicit DegenerateDesignError(const std::string& what,
                                 std::vector<std::string> subject_ids = {})
      : Error(what), subject_ids_(std::move(subject_ids)) {}

  const std::vector<std::string>& subject_ids() const noexcept { return subject_ids_; }

 private:
  std::vector<std::string> subject_ids_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Quantile function has flat segments, so no density exists.
class DegenerateDensityError : public Error {
 public:
  using Error::Error;
};

/// File could not be parsed, has the wrong schema, or violates an invariant.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace geomix
