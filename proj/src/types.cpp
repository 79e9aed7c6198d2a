#include "theta_atlas/types.hpp"

#include <cmath>

namespace theta_atlas {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "Domain";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SeedFailure: return "SeedFailure";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::CertificationFailure: return "CertificationFailure";
    case ErrorKind::AmbiguousNearSpectral: return "AmbiguousNearSpectral";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
  }
  return "Unknown";
}

Parameter::Parameter(Real q) : q_(std::move(q)) {
  if (!q_.is_finite() || q_ <= Real(0) || q_ >= Real(1)) {
    throw ThetaError(ErrorKind::Domain, "q must lie in (0,1), got " + q_.sci(17));
  }
}

void PrecisionConfig::validate() const {
  if (target_digits < 10) throw ThetaError(ErrorKind::Domain, "target_digits must be >= 10");
  if (working_digits < target_digits + 10) {
    throw ThetaError(ErrorKind::Domain, "working_digits must be >= target_digits + 10");
  }
}

double PrecisionConfig::target_error() const { return std::pow(10.0, -target_digits); }

void require_finite(const Complex& x, const char* what) {
  if (!x.is_finite()) throw ThetaError(ErrorKind::Domain, std::string(what) + " must be finite");
}

}  // namespace theta_atlas
