#pragma once

#include <cmath>
#include <string_view>

#include "theta_atlas/errors.hpp"
#include "theta_atlas/mp.hpp"
#include "theta_atlas/types.hpp"

namespace test {

using theta_atlas::Complex;
using theta_atlas::Real;

inline Real real(std::string_view s) { return Real(s); }
inline double d(const Real& r) { return r.to_double(); }

// -q^{-e} at `digits` digits.
inline Real neg_power(const Real& q, double e, int digits = 120) {
  theta_atlas::PrecisionScope scope(digits);
  return -pow(q, Real(-e));
}

template <class F>
theta_atlas::ErrorKind error_kind(F f) {
  try {
    f();
  } catch (const theta_atlas::ThetaError& e) {
    return e.kind();
  }
  throw std::logic_error("expected a ThetaError");
}

}  // namespace test
