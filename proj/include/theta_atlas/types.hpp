#pragma once

#include "theta_atlas/errors.hpp"
#include "theta_atlas/mp.hpp"

namespace theta_atlas {

/// The nome-like parameter q, restricted to the open interval (0, 1).
class Parameter {
 public:
  explicit Parameter(Real q);
  explicit Parameter(double q) : Parameter(Real(q)) {}

  const Real& value() const { return q_; }
  double approx() const { return q_.to_double(); }

 private:
  Real q_;
};

using ComplexPoint = Complex;

struct PrecisionConfig {
  int target_digits = 30;
  int working_digits = 50;

  /// Throws ThetaError(Domain) unless target >= 10 and working >= target + 10.
  void validate() const;
  /// 10^-target_digits as a double.
  double target_error() const;

  static PrecisionConfig with_target(int target) { return {target, target + 20}; }
};

/// Value of a series or product together with a bound on its distance to the
/// exact function value (truncation plus rounding).
struct EvalResult {
  ComplexPoint value;
  double abs_error = 0.0;
  int terms_used = 0;
};

/// Rejects non-finite arguments.
void require_finite(const Complex& x, const char* what);

}  // namespace theta_atlas
