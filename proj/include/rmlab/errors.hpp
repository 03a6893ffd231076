#pragma once

#include <stdexcept>
#include <string>

namespace rmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters (p, q, alpha, N, ...) outside the range an operation is defined on.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Malformed geometric input: mismatched dimensions, overlapping families,
/// cubes outside the domain.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double achieved_error)
      : Error(what), estimate_(estimate), achieved_error_(achieved_error) {}

  double estimate() const noexcept { return estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double estimate_;
  double achieved_error_;
};

/// Input sequence violated a precondition (e.g. non-monotone partial sums).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmlab
