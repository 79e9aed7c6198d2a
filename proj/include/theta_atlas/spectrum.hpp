#pragma once

// Spectral values q_k, at which theta(q, .) has a double real zero y_k, and
// the purely imaginary zeros obtained from the even/odd splitting
//
//     theta(q, iy) = psi1(v, y) + i psi2(v, y),  v = q^4,
//     psi1 = theta(v, -v^{-1/4} y^2),  psi2 = v^{1/4} y theta(v, -v^{1/4} y^2).

#include <array>
#include <vector>

#include "theta_atlas/complexzeros.hpp"
#include "theta_atlas/types.hpp"

namespace theta_atlas {

/// The first 25 spectral values to six decimals, as published.
extern const std::array<double, 25> kPublishedSpectrum;

/// 1 - pi/(2k) + ln(k)/(8k^2).
double spectral_asymptotic(int k);

/// Correction C in q_k ~ spectral_asymptotic(k) + C/k^2, calibrated at k = 25.
double spectral_asymptotic_constant();

struct SpectralPoint {
  int k = 0;
  Real q_tilde;
  Real y_double;
  // |theta| and |theta_x| at (q_tilde, y_double).
  std::array<double, 2> residuals{};
  double theta_xx = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

/// Damped Newton on (theta, theta_x) = 0 in (q, x). 1 <= k <= 40.
SpectralPoint find_spectral_point(int k, const PrecisionConfig& prec = {});

struct PsiValues {
  Real psi1, psi2;
  double err1 = 0.0;
  double err2 = 0.0;
};

PsiValues eval_psi(const Real& v, const Real& y, const PrecisionConfig& prec = {});

struct ChiMuSequences {
  std::vector<Real> chi;  // v^{1/8} sqrt(-xi*_k)
  std::vector<Real> mu;   // v^{-1/8} sqrt(-xi*_k)
};

/// Uses the real zeros xi*_1..xi*_count of theta(v, .).
ChiMuSequences chi_mu_sequences(const Real& v, int count, const PrecisionConfig& prec = {});

struct ImaginaryAxisSolution {
  int k2 = 0;
  Real v_star;
  Real q_star;  // v_star^{1/4}
  Real chi;     // the zeros are +-i chi
  std::array<double, 2> residuals{};  // |psi1|, |psi2|
  double theta_residual = 0.0;       // |theta(q_star, i chi)| bound
  CertifiedZero certificate;
  int bisection_steps = 0;
};

/// Locates v in (v_lo, v_hi) where mu_{2k2-1} = chi_{2k2}. Throws NoCrossing
/// unless the crossing is bracketed.
ImaginaryAxisSolution find_imaginary_axis_solution(int k2, const Real& v_lo, const Real& v_hi,
                                                   const PrecisionConfig& prec = {});

}  // namespace theta_atlas
