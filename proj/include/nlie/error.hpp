#pragma once

#include <stdexcept>
#include <string>

namespace nlie {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands built over different field descriptors, or a map/element applied
/// to the wrong carrier.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

class DivisionByZero : public Error {
public:
  DivisionByZero() : Error("division by zero") {}
};

/// A construction was asked to run outside the hypotheses it is valid under
/// (characteristic 2, lambda = 0, non-invariant bilinear form, ...).
class HypothesisViolation : public Error {
public:
  HypothesisViolation(std::string hypothesis, const std::string &detail)
      : Error("hypothesis violated: " + hypothesis + (detail.empty() ? "" : " (" + detail + ")")),
        hypothesis_(std::move(hypothesis)) {}
  const std::string &hypothesis() const noexcept { return hypothesis_; }

private:
  std::string hypothesis_;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

} // namespace nlie
