#pragma once

#include <stdexcept>
#include <string>

namespace theta_atlas {

enum class ErrorKind {
  Domain,
  BracketFailure,
  ConvergenceFailure,
  SeedFailure,
  DegreeOverflow,
  CertificationFailure,
  AmbiguousNearSpectral,
  NoCrossing,
  PreconditionUnmet,
  QuadratureFailure,
};

const char* to_string(ErrorKind kind);

class ThetaError : public std::runtime_error {
 public:
  ThetaError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace theta_atlas
