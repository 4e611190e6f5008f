#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skewgain {

enum class ErrorKind {
  NotHermitian,
  NotPositiveSemidefinite,
  DimensionMismatch,
  NumericalInstability,
  StateValidation,
  DegenerateObservable,
  NotSorted,
  IncompleteKrausSet,
  BadEnsemble,
  InvalidInstance,
  InvalidConfig,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind. `magnitude` holds the offending
/// quantity when there is one (a deficit norm, a residue, an eigenvalue), else 0.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(what), kind_(kind), magnitude_(magnitude) {}

  ErrorKind kind() const noexcept { return kind_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorKind kind_;
  double magnitude_;
};

}  // namespace skewgain
