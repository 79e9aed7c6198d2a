#include "theta_atlas/realzeros.hpp"

#include <cmath>

#include "theta_atlas/series.hpp"

namespace theta_atlas {

namespace {

constexpr int kSamples = 24;
constexpr int kBisectionSteps = 20;
constexpr int kIterationCap = 200;
constexpr int kMaxLeadingPairs = 60;

struct RealJet {
  Real value, dx, dxx;
  double err = 0.0;
  double err_dx = 0.0;
};

RealJet real_jet(const Real& q, const Real& x, const PrecisionConfig& prec, unsigned parts = kJetValue) {
  ThetaJet jet = theta_jet(q, Complex(x, Real(0)), prec, parts);
  RealJet out;
  out.value = std::move(jet.value.re);
  if (parts & kJetDx) out.dx = std::move(jet.dx.re);
  if (parts & kJetDxx) out.dxx = std::move(jet.dxx.re);
  out.err = jet.abs_error[0];
  out.err_dx = jet.abs_error[1];
  return out;
}

// -q^{-e}
Real neg_power(const Real& q, double e) { return -pow(q, Real(-e)); }

// Sign of theta(q, x) when it is resolved by the error bound, else 0.
int resolved_sign(const RealJet& j) {
  if (abs(j.value).to_double() <= j.err) return 0;
  return j.value.sign();
}

// theta is of size about q^{2j} on the outer interval of pair j, so the
// absolute error target is tightened by that factor.
PrecisionConfig scaled(const PrecisionConfig& prec, const Real& q, int j) {
  const int shift = static_cast<int>(std::ceil(-2.0 * j * std::log10(q.to_double()))) + 2;
  return {prec.target_digits + shift, prec.working_digits + shift};
}

// Arguments must carry as many digits as the series loses to cancellation,
// otherwise theta is evaluated accurately at the wrong point.
int local_digits(const PrecisionConfig& prec, const Real& q, int j) {
  const double lq = std::log10(q.to_double());
  return plan_theta_series(lq, -2.0 * j * lq, prec).digits + 10;
}

}  // namespace

PairMinimum locate_pair_minimum(const Parameter& qp, int j, const PrecisionConfig& user_prec) {
  user_prec.validate();
  const PrecisionConfig prec = scaled(user_prec, qp.value(), j);
  if (j < 1) throw ThetaError(ErrorKind::Domain, "pair index must be >= 1");
  PrecisionScope scope(local_digits(prec, qp.value(), j));
  const Real& q = qp.value();
  const Real ell = -log(q);
  const Real u_lo = Real(2 * j - 1) * ell;

  // In u = ln(-x) the pair interval is [(2j-1) L, 2j L] with L = -ln q.
  auto x_of = [&](const Real& u) { return -exp(u); };

  int best = 1;
  Real best_value;
  std::vector<Real> us(kSamples + 2);
  for (int i = 0; i <= kSamples + 1; ++i) us[i] = u_lo + ell * Real(i) / Real(kSamples + 1);
  for (int i = 1; i <= kSamples; ++i) {
    RealJet jt = real_jet(q, x_of(us[i]), prec);
    if (i == 1 || jt.value < best_value) {
      best = i;
      best_value = jt.value;
    }
  }

  // d theta / du = x theta_x, d^2 theta / du^2 = x theta_x + x^2 theta_xx.
  const unsigned parts = kJetValue | kJetDx | kJetDxx;
  auto slope = [&](const Real& u, RealJet& jt) {
    Real x = x_of(u);
    jt = real_jet(q, x, prec, parts);
    return x * jt.dx;
  };

  Real a = us[best - 1];
  Real b = us[best + 1];
  RealJet ja, jb, jm;
  Real ga = slope(a, ja);
  Real gb = slope(b, jb);
  Real u = us[best];
  if (ga.sign() < 0 && gb.sign() > 0) {
    const Real tol = ell * Real(std::pow(10.0, -prec.target_digits / 2.0 - 4));
    for (int it = 0; it < kIterationCap; ++it) {
      Real g = slope(u, jm);
      Real x = x_of(u);
      Real curvature = g + x * x * jm.dxx;
      if (g.sign() < 0) {
        a = u;
      } else {
        b = u;
      }
      Real next = (curvature.sign() > 0) ? u - g / curvature : (a + b) / Real(2);
      if (!(next > a && next < b)) next = (a + b) / Real(2);
      const bool done = abs(next - u) < tol || b - a < tol;
      u = next;
      if (done) break;
    }
  }
  RealJet jt = real_jet(q, x_of(u), prec);
  if (jt.value > best_value) {
    u = us[best];
    jt = real_jet(q, x_of(u), prec);
  }
  PairMinimum out;
  out.j = j;
  out.location = x_of(u);
  out.value = jt.value;
  out.value_error = jt.err;
  return out;
}

ZeroBracket bracket_real_zero(const Parameter& qp, int k, const PrecisionConfig& user_prec) {
  user_prec.validate();
  if (k < 1) throw ThetaError(ErrorKind::Domain, "zero index must be >= 1");
  const int j = (k + 1) / 2;
  const PrecisionConfig prec = scaled(user_prec, qp.value(), j);
  PrecisionScope scope(local_digits(prec, qp.value(), j));
  const Real& q = qp.value();
  const bool odd = (k % 2) == 1;

  ZeroBracket br;
  br.k = k;
  br.outer_lo = neg_power(q, 2.0 * j);
  br.outer_hi = neg_power(q, 2.0 * j - 1);

  if (qp.approx() <= 0.2) {
    Real lo = odd ? neg_power(q, k + 0.2) : neg_power(q, k);
    Real hi = odd ? neg_power(q, k) : neg_power(q, k - 0.2);
    const int s_lo = resolved_sign(real_jet(q, lo, prec));
    const int s_hi = resolved_sign(real_jet(q, hi, prec));
    if (s_lo != 0 && s_hi != 0 && s_lo != s_hi) {
      br.lo = std::move(lo);
      br.hi = std::move(hi);
      br.sign_separating = true;
      br.refined = true;
      return br;
    }
  }

  if (resolved_sign(real_jet(q, br.outer_lo, prec)) <= 0 || resolved_sign(real_jet(q, br.outer_hi, prec)) <= 0) {
    throw ThetaError(ErrorKind::BracketFailure, "theta is not positive at the ends of the pair interval");
  }

  Real split = neg_power(q, 2.0 * j - 0.5);
  if (resolved_sign(real_jet(q, split, prec)) >= 0) {
    PairMinimum m = locate_pair_minimum(qp, j, user_prec);
    if (!(m.value.sign() < 0 && abs(m.value).to_double() > m.value_error)) {
      throw ThetaError(ErrorKind::BracketFailure, "theta has no sign change on the pair interval; xi_" +
                                                      std::to_string(k) + " is not real for this q");
    }
    split = std::move(m.location);
  }
  if (odd) {
    br.lo = std::move(split);
    br.hi = br.outer_hi;
  } else {
    br.lo = br.outer_lo;
    br.hi = std::move(split);
  }
  br.sign_separating = true;
  return br;
}

RealZero find_real_zero(const Parameter& qp, int k, const PrecisionConfig& user_prec) {
  ZeroBracket br = bracket_real_zero(qp, k, user_prec);
  const PrecisionConfig prec = scaled(user_prec, qp.value(), (k + 1) / 2);
  PrecisionScope scope(local_digits(prec, qp.value(), (k + 1) / 2));
  const Real& q = qp.value();

  Real a = br.lo;
  Real b = br.hi;
  const int sign_a = real_jet(q, a, prec).value.sign();
  for (int i = 0; i < kBisectionSteps; ++i) {
    Real mid = (a + b) / Real(2);
    const int s = real_jet(q, mid, prec).value.sign();
    if (s == 0) {
      a = mid;
      b = mid;
      break;
    }
    if (s == sign_a) {
      a = std::move(mid);
    } else {
      b = std::move(mid);
    }
  }

  const double scale_ref = std::min(real_jet(q, br.outer_lo, prec).value.to_double(),
                                    real_jet(q, br.outer_hi, prec).value.to_double());
  const double guard = std::pow(10.0, -prec.target_digits / 2.0) * scale_ref;
  const Real step_tol = Real(std::pow(10.0, -prec.target_digits - 3));
  // Newton keeps going past step_tol for a few quadratic steps so that the
  // residual, not just the location, reaches working accuracy.
  const Real fine_tol = ldexp(Real(1), -static_cast<long>(digits_to_bits(current_digits())) + 8);
  int settle = 0;

  // Newton from whichever bracket end has the smaller residual; on a
  // strongly curved branch this is the end from which Newton stays inside.
  const unsigned parts = kJetValue | kJetDx;
  RealJet ja = real_jet(q, a, prec, parts);
  RealJet jb = real_jet(q, b, prec, parts);
  Real x;
  RealJet jt;
  bool converged = false;
  for (int it = kBisectionSteps; it < kIterationCap; ++it) {
    const bool from_a = abs(ja.value) <= abs(jb.value);
    const Real& x0 = from_a ? a : b;
    const RealJet& j0 = from_a ? ja : jb;
    Real next = j0.dx.is_zero() ? (a + b) / Real(2) : x0 - j0.value / j0.dx;
    if (!(next > min(a, b) && next < max(a, b))) next = (a + b) / Real(2);
    const Real moved = abs(next - x0);
    if (moved <= step_tol * abs(x0)) ++settle;
    x = std::move(next);
    jt = real_jet(q, x, prec, parts);
    if (abs(x * jt.dx).to_double() < guard) {
      throw ThetaError(ErrorKind::ConvergenceFailure,
                       "derivative too small near xi_" + std::to_string(k) + "; q is close to a spectral value");
    }
    const int s = jt.value.sign();
    if (s == 0 || abs(jt.value).to_double() <= jt.err || moved <= fine_tol * abs(x) || settle > 3) {
      converged = true;
      break;
    }
    if (s == sign_a) {
      a = x;
      ja = jt;
    } else {
      b = x;
      jb = jt;
    }
  }
  if (!converged) throw ThetaError(ErrorKind::ConvergenceFailure, "iteration cap reached for xi_" + std::to_string(k));

  RealZero out;
  out.k = k;
  out.residual = abs(jt.value).to_double() + jt.err;
  out.scale = abs(x * jt.dx).to_double();
  const double dlow = abs(jt.dx).to_double() - jt.err_dx;
  out.location_error = dlow > 0 ? 2.0 * out.residual / dlow : INFINITY;
  out.location = std::move(x);
  out.bracket = std::move(br);
  return out;
}

RealZeroList list_real_zeros(const Parameter& q, int count, const PrecisionConfig& prec) {
  if (count < 1) throw ThetaError(ErrorKind::Domain, "count must be >= 1");
  RealZeroList out;
  out.requested = count;
  int k = 1;
  while (static_cast<int>(out.zeros.size()) < count) {
    try {
      RealZero z = find_real_zero(q, k, prec);
      if (!out.zeros.empty() && !(z.location < out.zeros.back().location)) {
        throw ThetaError(ErrorKind::ConvergenceFailure, "real zeros out of order at xi_" + std::to_string(k));
      }
      if (out.zeros.empty()) out.first_index = k;
      out.zeros.push_back(std::move(z));
      ++k;
    } catch (const ThetaError& e) {
      const bool leading_pair = out.zeros.empty() && e.kind() == ErrorKind::BracketFailure && k % 2 == 1 &&
                                (k + 1) / 2 <= kMaxLeadingPairs;
      if (leading_pair) {
        out.gap = true;
        k += 2;
        continue;
      }
      out.short_count = true;
      out.stop_reason = e;
      break;
    }
  }
  return out;
}

}  // namespace theta_atlas
