#pragma once

#include <stdexcept>
#include <string>

namespace octa {

/// Base of every contract violation raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveG : public Error {
 public:
  explicit NonPositiveG(double g);
  double g;
};

class DegenerateLeg : public Error {
 public:
  DegenerateLeg(int leg, double length);
  int leg;  // 1-based
  double length;
};

/// Raised when the normalized Jacobian determinant is below the singularity
/// tolerance; carries the offending value.
class SingularJacobian : public Error {
 public:
  explicit SingularJacobian(double margin);
  double margin;
};

/// det J / g^3 failed the quadratic hold-out check. Always an internal bug.
class StructureViolation : public Error {
 public:
  explicit StructureViolation(double relative_residual);
  double relative_residual;
};

class DegenerateOrientation : public Error {
 public:
  explicit DegenerateOrientation(std::string guard);
  std::string guard;
};

class CaseMismatch : public Error {
 public:
  explicit CaseMismatch(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace octa
