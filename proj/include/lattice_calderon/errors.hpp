#pragma once

#include <stdexcept>
#include <string>

namespace lc {

// Bad input: malformed files, inconsistent sizes, inadmissible parameters. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: singular systems, vanishing divisors, tau exhaustion. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, double sigma_min, double norm)
      : NumericalError(what), sigma_min(sigma_min), norm(norm) {}
  double sigma_min;
  double norm;
};

class TauExhaustedError : public NumericalError {
 public:
  TauExhaustedError(const std::string& what, int plane) : NumericalError(what), plane(plane) {}
  int plane;
};

// Reading a component that is undefined at a site (or outside the stored window) is a bug.
class UndefinedValueError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A potential entry outside the supplied region was requested.
class MissingPotentialError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class WindowExhaustedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lc
