#pragma once

#include <stdexcept>
#include <string>

namespace zmeq {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (shapes, masses, labels, options).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A residual evaluated to NaN or +-infinity.
class NonFiniteResidual : public Error {
 public:
  NonFiniteResidual(std::string label, double value);

  const std::string& label() const noexcept { return label_; }
  double value() const noexcept { return value_; }

 private:
  std::string label_;
  double value_;
};

/// The scalar equation for one coordinate has no sign change: the map is not
/// responsive at the queried point.
class ResponsivenessViolation : public Error {
 public:
  ResponsivenessViolation(std::string label, const std::string& detail);

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class IrreducibilityViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedFrontier : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// A postcondition the algorithms guarantee did not hold.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace zmeq
