#pragma once

// Real zeros xi_1 > xi_2 > ... of theta(q, .), all negative.
//
// For j >= 1 the pair (xi_{2j}, xi_{2j-1}) lies in the outer interval
// (-q^{-2j}, -q^{-2j+1}), on whose endpoints theta is positive. A point of
// the interval where theta is negative splits it into two sign-separating
// brackets; when no such point exists the pair has become complex.

#include <optional>
#include <vector>

#include "theta_atlas/types.hpp"

namespace theta_atlas {

struct ZeroBracket {
  int k = 0;
  Real lo;  // lo < hi < 0
  Real hi;
  // The interval (-q^{-2j}, -q^{-2j+1}), j = ceil(k/2), containing the pair.
  Real outer_lo;
  Real outer_hi;
  bool sign_separating = false;
  // True when the tighter brackets for q <= 0.2 were used.
  bool refined = false;
};

struct RealZero {
  int k = 0;
  Real location;
  // Upper bound on |theta(q, location)|.
  double residual = 0.0;
  // |x theta'(x)| at the zero, the scale residual is measured against.
  double scale = 0.0;
  // Bound on |location - xi_k| from residual and derivative.
  double location_error = 0.0;
  ZeroBracket bracket;
};

/// Smallest value of theta(q, .) on the outer interval of pair j.
struct PairMinimum {
  int j = 0;
  Real location;
  Real value;
  double value_error = 0.0;
};

PairMinimum locate_pair_minimum(const Parameter& q, int j, const PrecisionConfig& prec = {});

/// Throws ThetaError(BracketFailure) if xi_k is not real for this q.
ZeroBracket bracket_real_zero(const Parameter& q, int k, const PrecisionConfig& prec = {});

/// Bisection inside the bracket followed by Newton polishing. Throws
/// ConvergenceFailure close to a double zero.
RealZero find_real_zero(const Parameter& q, int k, const PrecisionConfig& prec = {});

struct RealZeroList {
  std::vector<RealZero> zeros;
  // Index of the first returned zero; > 1 when leading pairs are complex.
  int first_index = 1;
  bool gap = false;
  // Fewer than the requested zeros were found.
  bool short_count = false;
  int requested = 0;
  std::optional<ThetaError> stop_reason;
};

RealZeroList list_real_zeros(const Parameter& q, int count, const PrecisionConfig& prec = {});

}  // namespace theta_atlas
