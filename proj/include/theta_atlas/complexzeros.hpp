#pragma once

// All zeros of theta(q, .) in a disk |x| < R.
//
// The series is truncated to a polynomial whose tail is negligible on the
// disk, the polynomial's roots are found simultaneously by Aberth iteration,
// and every root inside the disk is polished by Newton on the full series and
// certified: a disk around it is shown (Rouché against the linear Taylor
// part) to contain exactly one zero of theta.

#include <complex>
#include <span>
#include <vector>

#include "theta_atlas/types.hpp"

namespace theta_atlas {

struct TruncationPolynomial {
  Real q;
  int degree = 0;
  double radius = 0.0;
  // Bound on sum_{j > degree} q^{j(j+1)/2} R^j.
  double tail_bound_on_disk = 0.0;
  // log10 of the largest term q^{j(j+1)/2} R^j.
  double log10_max_term = 0.0;
  // Decimal digits needed to evaluate the polynomial on the disk.
  int digits = 0;
  // q^{j(j+1)/2}, j = 0..degree.
  std::vector<Real> coefficients;
};

/// Throws DegreeOverflow above degree 5000.
TruncationPolynomial build_truncation(const Parameter& q, double radius, const PrecisionConfig& prec = {});

enum class ZeroStatus { Certified, NearDoubleUncertified };

const char* to_string(ZeroStatus status);

struct CertifiedZero {
  ComplexPoint location;
  double residual = 0.0;     // upper bound on |theta(q, location)|
  double deriv_lower = 0.0;  // lower bound on |theta_x| on the certification disk
  double cert_radius = 0.0;
  double newton_step = 0.0;  // |theta / theta_x| at location
  ZeroStatus status = ZeroStatus::NearDoubleUncertified;

  bool is_real() const { return location.im.is_zero(); }
  bool certified() const { return status == ZeroStatus::Certified; }
};

struct ZeroSearchOptions {
  // Roots of the truncation from a nearby q, used as starting points.
  std::vector<std::complex<double>> warm_start;
  int max_iterations = 600;
};

struct ZeroSet {
  double q = 0.0;
  double radius = 0.0;
  int degree = 0;
  // Real zeros (rightmost first), then conjugate pairs ordered by modulus,
  // each pair as (upper, lower).
  std::vector<CertifiedZero> zeros;
  // Every root of the truncation in double precision (for warm starts).
  std::vector<std::complex<double>> truncation_roots;
  int iterations = 0;
  int attempts = 0;

  int real_count() const;
  int pair_count() const;
  bool all_certified() const;
};

/// Certifies `z` as an isolated zero of theta(q, .) given its truncation.
CertifiedZero certify_zero(const TruncationPolynomial& poly, const ComplexPoint& z, const PrecisionConfig& prec);

ZeroSet find_all_zeros(const Parameter& q, double radius = 55.0, const PrecisionConfig& prec = {},
                       const ZeroSearchOptions& options = {});

/// Number of conjugate pairs with modulus < 55. Throws AmbiguousNearSpectral
/// when some zero cannot be certified.
int count_pairs(const Parameter& q, const PrecisionConfig& prec = {});

}  // namespace theta_atlas
