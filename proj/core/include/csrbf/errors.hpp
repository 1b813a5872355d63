#pragma once

#include <stdexcept>
#include <string>

namespace csrbf {

// Precondition violations raise std::invalid_argument / std::domain_error.
// The types below mark failures a caller may want to handle specifically.

class UnsupportedKernel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteValue : public std::runtime_error {
 public:
  NonFiniteValue(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}

  double where() const noexcept { return where_; }

 private:
  double where_;
};

// The maximum of a trajectory sits on the boundary of the sampled window.
class PeakNotCaptured : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csrbf
