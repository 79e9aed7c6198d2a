#include "theta_atlas/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace theta_atlas {

namespace {

constexpr double kLog10Two = 0.30102999566398120;
constexpr int kMaxTerms = 400000;

double log10_sum_exp10(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log10(1.0 + std::pow(10.0, b - a));
}

int weight_power(unsigned parts) {
  if (parts & kJetDxq) return 3;
  if (parts & (kJetDxx | kJetDq)) return 2;
  if (parts & kJetDx) return 1;
  return 0;
}

// log10 of the weight bound (j+1)^p used for every derivative family.
double log10_weight(int j, int p) { return p * std::log10(static_cast<double>(j) + 1.0); }

double unit_roundoff(int digits) { return std::ldexp(1.0, -static_cast<int>(digits_to_bits(digits)) + 1); }
// Same, for precisions where the double would underflow.
double log10_unit_roundoff(int digits) { return (1.0 - static_cast<double>(digits_to_bits(digits))) * std::log10(2.0); }
Real real_unit_roundoff(int digits) { return ldexp(Real(1), -static_cast<long>(digits_to_bits(digits)) + 1); }

double log10_abs(const Real& v) {
  if (v.is_zero()) return -std::numeric_limits<double>::infinity();
  // Split into mantissa and binary exponent so huge or tiny values survive.
  long e = v.exponent2();
  double m = ldexp(abs(v), -e).to_double();
  return std::log10(m) + e * kLog10Two;
}

double log10_abs(const Complex& z) {
  return 0.5 * log10_sum_exp10(2 * log10_abs(z.re), 2 * log10_abs(z.im));
}

}  // namespace

SeriesPlan plan_theta_series(double lq, double lx, const PrecisionConfig& prec, unsigned parts) {
  SeriesPlan plan;
  if (lx == -std::numeric_limits<double>::infinity()) {
    plan.last_index = 0;
    plan.digits = prec.working_digits + 2;
    return plan;
  }
  const int p = weight_power(parts);
  const double budget = -prec.target_digits - std::log10(8.0);

  // Smallest N with q^{N+1} |x| <= 1/2: beyond it the terms decay geometrically.
  int n = static_cast<int>(std::ceil((lx + kLog10Two) / -lq)) - 1;
  n = std::max(n, 1);
  for (;; ++n) {
    if (n > kMaxTerms) throw ThetaError(ErrorKind::DegreeOverflow, "series needs too many terms");
    const double log_ratio = (n + 2) * lq + lx;
    const double weight_ratio = std::pow(static_cast<double>(n + 3) / (n + 2), p);
    const double rho = weight_ratio * std::pow(10.0, log_ratio);
    if (rho > 0.75) continue;
    const double log_next = 0.5 * (n + 1.0) * (n + 2.0) * lq + (n + 1) * lx;
    const double log_tail = log10_weight(n + 1, p) + log_next - std::log10(1.0 - rho);
    // Derivative sums are divided by |x|^k and possibly by q.
    double worst = log_tail;
    if (parts & kJetDx) worst = std::max(worst, log_tail - lx);
    if (parts & kJetDxx) worst = std::max(worst, log_tail - 2 * lx);
    if (parts & kJetDq) worst = std::max(worst, log_tail - lq);
    if (parts & kJetDxq) worst = std::max(worst, log_tail - lq - lx);
    if (worst <= budget) {
      plan.last_index = n;
      plan.log10_tail = log_next + std::log10(1.0 / (1.0 - std::pow(10.0, log_ratio)));
      break;
    }
  }

  double maj = -std::numeric_limits<double>::infinity();
  double maj_w = maj;
  for (int j = 0; j <= plan.last_index; ++j) {
    const double lt = 0.5 * j * (j + 1.0) * lq + j * lx;
    maj = log10_sum_exp10(maj, lt);
    maj_w = log10_sum_exp10(maj_w, lt + log10_weight(j, p));
  }
  plan.log10_majorant = maj;
  double lost = maj_w;
  if (parts & kJetDx) lost = std::max(lost, maj_w - lx);
  if (parts & kJetDxx) lost = std::max(lost, maj_w - 2 * lx);
  if (parts & kJetDq) lost = std::max(lost, maj_w - lq);
  if (parts & kJetDxq) lost = std::max(lost, maj_w - lq - lx);
  plan.digits = prec.working_digits + static_cast<int>(std::ceil(std::max(0.0, lost))) +
                static_cast<int>(std::ceil(std::log10(plan.last_index + 2.0))) + 2;
  return plan;
}

ThetaJet theta_jet(const Real& q, const Complex& x, const PrecisionConfig& prec, unsigned parts) {
  prec.validate();
  require_finite(x, "x");
  if (!(q > Real(0) && q < Real(1))) throw ThetaError(ErrorKind::Domain, "q must lie in (0,1)");
  parts |= kJetValue;

  ThetaJet jet;
  if (x.is_zero()) {
    PrecisionScope scope(prec.working_digits);
    jet.value = Complex(Real(1), Real(0));
    jet.dx = Complex(q, Real(0));
    jet.dxx = Complex(Real(2) * q * q * q, Real(0));
    jet.dq = Complex(Real(0), Real(0));
    jet.dxq = Complex(Real(1), Real(0));
    jet.terms_used = 1;
    jet.digits_used = prec.working_digits;
    return jet;
  }

  const double lq = log10_abs(q);
  const double lx = log10_abs(x);
  const SeriesPlan plan = plan_theta_series(lq, lx, prec, parts);
  PrecisionScope scope(plan.digits);
  const bool real_axis = x.im.is_zero();
  const int p = weight_power(parts);

  Real qq = q;
  Complex z(x.re, x.im);
  Real one(1);
  Complex term(one, Real(0));
  Complex factor = Complex(qq * z.re, qq * z.im);  // q^j x at step j
  Complex sum(one, Real(0));
  Complex s1, s2, s3, s4;
  Real tmp1, tmp2, tmp3;

  const long n = plan.last_index;
  for (long j = 1; j <= n; ++j) {
    if (j > 1) {
      factor.re *= qq;
      if (!real_axis) factor.im *= qq;
    }
    if (real_axis) {
      term.re *= factor.re;
    } else {
      mul_to(tmp1, term.re, factor.re);
      mul_to(tmp2, term.im, factor.im);
      mul_to(tmp3, term.re, factor.im);
      mul_to(term.im, term.im, factor.re);
      term.im += tmp3;
      sub_to(term.re, tmp1, tmp2);
    }
    sum.re += term.re;
    if (!real_axis) sum.im += term.im;
    auto accumulate = [&](Complex& acc, long w) {
      mpfr_mul_si(tmp1.raw(), term.re.raw(), w, MPFR_RNDN);
      acc.re += tmp1;
      if (!real_axis) {
        mpfr_mul_si(tmp1.raw(), term.im.raw(), w, MPFR_RNDN);
        acc.im += tmp1;
      }
    };
    if (parts & kJetDx) accumulate(s1, j);
    if (parts & kJetDxx) accumulate(s2, j * (j - 1));
    if (parts & kJetDq) accumulate(s3, j * (j + 1) / 2);
    if (parts & kJetDxq) accumulate(s4, j * (j * (j + 1) / 2));
  }

  // Error bookkeeping in log10 space.
  const double log_round = std::log10(4.0 * (n + 1)) + log10_unit_roundoff(plan.digits);
  double maj_w = -std::numeric_limits<double>::infinity();
  for (long j = 0; j <= n; ++j) {
    maj_w = log10_sum_exp10(maj_w, 0.5 * j * (j + 1.0) * lq + j * lx + log10_weight(static_cast<int>(j), p));
  }
  const double log_next = 0.5 * (n + 1.0) * (n + 2.0) * lq + (n + 1) * lx;
  const double rho = std::pow(static_cast<double>(n + 3) / (n + 2), p) * std::pow(10.0, (n + 2) * lq + lx);
  const double log_tail_w = log10_weight(static_cast<int>(n + 1), p) + log_next - std::log10(1.0 - rho);
  auto bound = [&](double shift, double log_tail) {
    return std::pow(10.0, log10_sum_exp10(log_tail, log_round + maj_w) - shift + 1e-9);
  };

  jet.value = sum;
  jet.abs_error[0] = bound(0.0, plan.log10_tail);
  if (real_axis) {
    jet.value.im = Real(0);
  }
  if (parts & kJetDx) {
    jet.dx = s1 / z;
    jet.abs_error[1] = bound(lx, log_tail_w);
  }
  if (parts & kJetDxx) {
    jet.dxx = s2 / (z * z);
    jet.abs_error[2] = bound(2 * lx, log_tail_w);
  }
  if (parts & kJetDq) {
    jet.dq = s3 / qq;
    jet.abs_error[3] = bound(lq, log_tail_w);
  }
  if (parts & kJetDxq) {
    jet.dxq = s4 / (z * qq);
    jet.abs_error[4] = bound(lq + lx, log_tail_w);
  }
  jet.terms_used = static_cast<int>(n + 1);
  jet.digits_used = plan.digits;
  jet.log10_majorant = plan.log10_majorant;
  return jet;
}

EvalResult eval_theta(const Parameter& q, const ComplexPoint& x, const PrecisionConfig& prec) {
  ThetaJet jet = theta_jet(q.value(), x, prec, kJetValue);
  return {std::move(jet.value), jet.abs_error[0], jet.terms_used};
}

EvalResult eval_theta_star(const Parameter& qp, const ComplexPoint& x, const PrecisionConfig& prec) {
  prec.validate();
  require_finite(x, "x");
  if (x.is_zero()) throw ThetaError(ErrorKind::Domain, "Theta* is undefined at x = 0");

  const Real& q = qp.value();
  const double lq = log10_abs(q);
  const double ax = std::pow(10.0, log10_abs(x));
  const double spread = 1.0 + ax + 1.0 / ax;
  const double one_minus_q = 1.0 - q.to_double();
  const double budget = prec.target_error() / 8.0;

  // Tail factors satisfy |prod_{m>M} (1+e_m) - 1| <= exp(s) - 1 <= 2 s for
  // s = sum_{m>M} q^m (1 + |x| + 1/|x|) <= 1.
  int m_last = 1;
  double tail_sum = 0.0;
  for (;; ++m_last) {
    if (m_last > kMaxTerms) throw ThetaError(ErrorKind::DegreeOverflow, "product needs too many factors");
    tail_sum = std::pow(10.0, (m_last + 1) * lq) * spread / one_minus_q;
    if (2.0 * tail_sum <= budget) break;
  }

  const int digits = prec.working_digits + 4 + static_cast<int>(std::ceil(std::log10(3.0 * m_last + 3.0)));
  PrecisionScope scope(digits);
  const double u = unit_roundoff(digits);

  Real one(1);
  Complex z(x.re, x.im);
  Complex inv = Complex(one, Real(0)) / z;
  Real qq = q;

  // Track log|factor| and each factor's absolute rounding error.
  double log_abs_sum = 0.0;
  double rel_err = 0.0;
  int zero_factors = 0;
  double zero_factor_err = 0.0;
  auto account = [&](const Complex& f, double magnitude_hint, int steps) {
    const double err = u * (steps + 2) * (1.0 + magnitude_hint);
    const double lf = log10_abs(f);
    if (lf == -std::numeric_limits<double>::infinity()) {
      ++zero_factors;
      zero_factor_err += err;
      return;
    }
    log_abs_sum += lf;
    rel_err += err / std::pow(10.0, lf);
  };

  Complex product = Complex(one + inv.re, inv.im);
  account(product, 1.0 / ax, 1);
  Real qm(1);
  ComplexMac mac;
  Complex fa, fb, fc, tmp;
  for (int m = 1; m <= m_last; ++m) {
    qm *= qq;
    const double qmd = std::pow(10.0, m * lq);
    fa = Complex(one - qm, Real(0));
    fb = Complex(one + z.re * qm, z.im * qm);
    fc = Complex(one + inv.re * qm, inv.im * qm);
    account(fa, qmd, m);
    account(fb, qmd * ax, m);
    account(fc, qmd / ax, m);
    mac.mul(tmp, product, fa);
    mac.mul(product, tmp, fb);
    mac.mul(tmp, product, fc);
    std::swap(product, tmp);
  }

  const double mult_err = u * (3.0 * m_last + 3.0);
  double err = 0.0;
  if (zero_factors == 0) {
    const double mag = std::pow(10.0, log_abs_sum);
    err = mag * (rel_err + mult_err + 2.0 * tail_sum);
  } else {
    err = std::pow(10.0, log_abs_sum) * zero_factor_err * (1.0 + mult_err);
  }
  return {std::move(product), err, m_last};
}

EvalResult eval_G(const Parameter& q, const ComplexPoint& x, const PrecisionConfig& prec) {
  prec.validate();
  require_finite(x, "x");
  if (x.is_zero()) throw ThetaError(ErrorKind::Domain, "G is undefined at x = 0");

  const int arg_digits = std::max(prec.working_digits + 20,
                                  plan_theta_series(log10_abs(q.value()), -log10_abs(x), prec).digits + 10);
  Complex y;
  {
    PrecisionScope scope(arg_digits);
    y = Complex(Real(1), Real(0)) / x;
  }
  ThetaJet jet = theta_jet(q.value(), y, prec, kJetValue | kJetDx);
  PrecisionScope scope(jet.digits_used);
  EvalResult out;
  out.value = jet.value * y;
  const double ay = abs(y).to_double();
  // Rounding of 1/x perturbs the argument by at most u_arg |y|.
  const double arg_err = std::abs(abs(jet.dx).to_double()) * ay * unit_roundoff(arg_digits) * 2.0;
  out.abs_error = ay * (jet.abs_error[0] + arg_err) * (1.0 + 1e-15);
  out.terms_used = jet.terms_used;
  return out;
}

IdentityResiduals check_identities(const Parameter& qp, const ComplexPoint& x, const PrecisionConfig& prec) {
  prec.validate();
  require_finite(x, "x");
  if (x.is_zero()) throw ThetaError(ErrorKind::Domain, "identities are checked for x != 0");

  const Real& q = qp.value();
  // The shifted arguments must carry the digits each series loses to
  // cancellation.
  const double lq = std::log10(qp.approx());
  const double lx = std::log10(abs(x).to_double());
  const int arg_digits = std::max({prec.working_digits + 30, plan_theta_series(lq, lx, prec).digits + 10,
                                   plan_theta_series(4.0 * lq, 2.0 * lx - lq, prec).digits + 10});
  Real q4;
  Complex qx, x2q, qx2;
  {
    PrecisionScope scope(arg_digits);
    Real qq = q;
    q4 = qq * qq * qq * qq;
    qx = x * qq;
    Complex xx = x * x;
    x2q = xx / qq;
    qx2 = xx * qq;
  }
  const unsigned parts = kJetValue | kJetDx;
  ThetaJet t_x = theta_jet(q, x, prec, parts);
  ThetaJet t_qx = theta_jet(q, qx, prec, parts);
  ThetaJet t_even = theta_jet(q4, x2q, prec, parts);
  ThetaJet t_odd = theta_jet(q4, qx2, prec, parts);
  EvalResult ts = eval_theta_star(qp, x, prec);
  EvalResult g = eval_G(qp, x, prec);

  const int digits = std::max({t_x.digits_used, t_qx.digits_used, t_even.digits_used, t_odd.digits_used}) + 10;
  PrecisionScope scope(digits);
  const Real u_arg = real_unit_roundoff(arg_digits) * Real(4);

  // Argument rounding: |theta(q, a(1+d)) - theta(q, a)| <= |a| |d| max|theta'|.
  auto arg_perturb = [&](const ThetaJet& j, const Complex& a) {
    return Real(2) * u_arg * abs(a) * (abs(j.dx) + Real(j.abs_error[1]));
  };

  IdentityResiduals out;
  const Real aqx = abs(qx);
  {
    Complex r = t_x.value - Complex(Real(1), Real(0)) - qx * t_qx.value;
    out.residual[0] = abs(r);
    out.bound[0] = Real(t_x.abs_error[0]) + aqx * (Real(t_qx.abs_error[0]) + arg_perturb(t_qx, qx)) +
                   aqx * abs(t_qx.value) * u_arg;
  }
  {
    Complex r = t_x.value - t_even.value - qx * t_odd.value;
    out.residual[1] = abs(r);
    out.bound[1] = Real(t_x.abs_error[0]) + Real(t_even.abs_error[0]) + arg_perturb(t_even, x2q) +
                   aqx * (Real(t_odd.abs_error[0]) + arg_perturb(t_odd, qx2)) + aqx * abs(t_odd.value) * u_arg;
  }
  {
    Complex r = t_x.value - ts.value + g.value;
    out.residual[2] = abs(r);
    out.bound[2] = Real(t_x.abs_error[0]) + Real(ts.abs_error) + Real(g.abs_error);
  }
  // Final subtractions at `digits` precision.
  const Real u = real_unit_roundoff(digits) * Real(8);
  for (int i = 0; i < 3; ++i) {
    out.bound[i] += u * (Real(1) + abs(t_x.value) + abs(ts.value));
  }
  return out;
}

EvalResult eval_katsnelson_family(const Real& eps, const ComplexPoint& z, const PrecisionConfig& prec) {
  prec.validate();
  require_finite(z, "z");
  if (!(eps > Real(0))) throw ThetaError(ErrorKind::Domain, "eps must be positive");
  Real q;
  Complex x;
  {
    PrecisionScope scope(prec.working_digits + 20);
    Real e = eps;
    q = exp(Real(-2) * e);
    x = z * exp(e);
  }
  return eval_theta(Parameter(q), x, prec);
}

}  // namespace theta_atlas
