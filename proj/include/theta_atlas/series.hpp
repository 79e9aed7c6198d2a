#pragma once

// Evaluation of the partial theta function
//
//     theta(q, x) = sum_{j >= 0} q^{j(j+1)/2} x^j,
//
// the bilateral function Theta*(q, x) (sum over all integers j, evaluated as
// a triple product) and the negative-index tail G(q, x), each with an
// explicit bound on truncation and rounding error.
//
// Working precision is raised above PrecisionConfig::working_digits by the
// number of digits lost to cancellation, estimated from the largest term.

#include <array>

#include "theta_atlas/types.hpp"

namespace theta_atlas {

/// Partial derivatives that theta_jet() can compute alongside the value.
enum JetPart : unsigned {
  kJetValue = 1u,
  kJetDx = 2u,    // d/dx
  kJetDxx = 4u,   // d^2/dx^2
  kJetDq = 8u,    // d/dq
  kJetDxq = 16u,  // d^2/dxdq
};

struct ThetaJet {
  Complex value, dx, dxx, dq, dxq;
  // Absolute error bounds, same order as the fields above.
  std::array<double, 5> abs_error{};
  int terms_used = 0;
  int digits_used = 0;
  // log10 of sum_j q^{j(j+1)/2} |x|^j over the summed range.
  double log10_majorant = 0.0;
};

/// Truncation index and working precision for summing theta(q, x).
struct SeriesPlan {
  int last_index = 0;  // terms j = 0..last_index are summed
  int digits = 0;
  double log10_majorant = 0.0;
  double log10_tail = -1e300;  // bound on the value tail
};

/// Plans the series for |x| = 10^log10_abs_x (pass -inf for x = 0).
SeriesPlan plan_theta_series(double log10_q, double log10_abs_x, const PrecisionConfig& prec,
                             unsigned parts = kJetValue);

/// Value and selected partial derivatives of theta at (q, x).
ThetaJet theta_jet(const Real& q, const Complex& x, const PrecisionConfig& prec,
                   unsigned parts = kJetValue);

EvalResult eval_theta(const Parameter& q, const ComplexPoint& x, const PrecisionConfig& prec = {});

/// Theta*(q, x) = (1 + 1/x) prod_{m>=1} (1 - q^m)(1 + x q^m)(1 + q^m / x).
EvalResult eval_theta_star(const Parameter& q, const ComplexPoint& x, const PrecisionConfig& prec = {});

/// G(q, x) = sum_{j>=1} q^{j(j-1)/2} x^{-j}, computed as theta(q, 1/x) / x.
EvalResult eval_G(const Parameter& q, const ComplexPoint& x, const PrecisionConfig& prec = {});

struct IdentityResiduals {
  // |theta(q,x) - 1 - q x theta(q,qx)|
  // |theta(q,x) - theta(q^4, x^2/q) - q x theta(q^4, q x^2)|
  // |theta(q,x) - Theta*(q,x) + G(q,x)|
  // Kept as Real: near q = 1 the values exceed the double range.
  std::array<Real, 3> residual;
  // Sums of the operand error bounds for each residual.
  std::array<Real, 3> bound;

  bool within_bounds() const {
    return residual[0] <= bound[0] && residual[1] <= bound[1] && residual[2] <= bound[2];
  }
};

IdentityResiduals check_identities(const Parameter& q, const ComplexPoint& x, const PrecisionConfig& prec = {});

/// f_eps(z) = sum_n e^{-eps n^2} z^n = theta(e^{-2 eps}, z e^{eps}).
EvalResult eval_katsnelson_family(const Real& eps, const ComplexPoint& z, const PrecisionConfig& prec = {});

}  // namespace theta_atlas
