#pragma once

#include <stdexcept>
#include <string>

namespace phasepairs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Singular matrices, non-positive widths, bad rationals and the like.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A construction was requested whose hypothesis does not hold.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : Error("hypothesis violated [" + hypothesis + "]: " + detail),
        hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace phasepairs
