#include "theta_atlas/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "theta_atlas/realzeros.hpp"
#include "theta_atlas/series.hpp"

namespace theta_atlas {

const std::array<double, 25> kPublishedSpectrum = {
    0.309249, 0.516959, 0.630628, 0.701265, 0.749269, 0.783984, 0.810251, 0.830816, 0.847353,
    0.860942, 0.872305, 0.881949, 0.890237, 0.897435, 0.903747, 0.909325, 0.914291, 0.918741,
    0.922751, 0.926384, 0.929689, 0.932711, 0.935482, 0.938035, 0.940393};

double spectral_asymptotic(int k) {
  const double kk = k;
  return 1.0 - std::numbers::pi / (2.0 * kk) + std::log(kk) / (8.0 * kk * kk);
}

double spectral_asymptotic_constant() {
  return (kPublishedSpectrum[24] - spectral_asymptotic(25)) * 625.0;
}

namespace {

constexpr int kNewtonCap = 100;
constexpr unsigned kAllParts = kJetValue | kJetDx | kJetDxx | kJetDq | kJetDxq;

int pair_digits(double q, int k, const PrecisionConfig& prec, unsigned parts) {
  const double lq = std::log10(q);
  return plan_theta_series(lq, -2.0 * k * lq, prec, parts).digits + 10;
}

struct Jet2 {
  Real f, fx, fxx, fq, fxq;
  double err = 0.0, err_x = 0.0;
};

Jet2 real_jet(const Real& q, const Real& x, const PrecisionConfig& prec, unsigned parts) {
  ThetaJet j = theta_jet(q, Complex(x, Real(0)), prec, parts);
  Jet2 out;
  out.f = std::move(j.value.re);
  out.fx = std::move(j.dx.re);
  out.fxx = std::move(j.dxx.re);
  out.fq = std::move(j.dq.re);
  out.fxq = std::move(j.dxq.re);
  out.err = j.abs_error[0];
  out.err_x = j.abs_error[1];
  return out;
}

struct NewtonResult {
  Real q, x;
  Jet2 jet;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton for theta = theta_x = 0. Residual norm balances the two
// equations by |x|.
NewtonResult spectral_newton(Real q, Real x, const PrecisionConfig& prec) {
  NewtonResult r;
  auto norm = [](const Jet2& j, const Real& xx) {
    return std::max(abs(j.f).to_double(), abs(xx * j.fx).to_double());
  };
  Jet2 jet = real_jet(q, x, prec, kAllParts);
  double current = norm(jet, x);
  const Real tol_q = Real(std::pow(10.0, -prec.target_digits - 3));
  const Real tol_x = tol_q * abs(x);
  for (int it = 0; it < kNewtonCap; ++it) {
    r.iterations = it + 1;
    if (abs(jet.f).to_double() <= jet.err && abs(jet.fx).to_double() <= jet.err_x) {
      r.converged = true;
      break;
    }
    // [fq fx; fxq fxx] (dq, dx) = (f, fx)
    Real det = jet.fq * jet.fxx - jet.fx * jet.fxq;
    if (det.is_zero()) break;
    Real dq = (jet.f * jet.fxx - jet.fx * jet.fx) / det;
    Real dx = (jet.fq * jet.fx - jet.fxq * jet.f) / det;
    Real lambda(1);
    bool accepted = false;
    Jet2 trial;
    Real qn, xn;
    for (int h = 0; h < 40; ++h) {
      qn = q - lambda * dq;
      xn = x - lambda * dx;
      if (qn > Real(0) && qn < Real(1) && xn < Real(0)) {
        trial = real_jet(qn, xn, prec, kAllParts);
        const double trial_norm = norm(trial, xn);
        if (trial_norm < current || (abs(dq) <= tol_q && abs(dx) <= tol_x)) {
          accepted = true;
          current = trial_norm;
          break;
        }
      }
      lambda = lambda / Real(2);
    }
    if (!accepted) break;
    const bool small = abs(lambda * dq) <= tol_q && abs(lambda * dx) <= tol_x;
    q = std::move(qn);
    x = std::move(xn);
    jet = std::move(trial);
    if (small) {
      r.converged = true;
      break;
    }
  }
  r.q = std::move(q);
  r.x = std::move(x);
  r.jet = std::move(jet);
  return r;
}

bool valid_double_zero(const NewtonResult& r, int k) {
  if (!r.converged) return false;
  const Real lo = -pow(r.q, Real(-2 * k));
  const Real hi = -pow(r.q, Real(-2 * k + 1));
  return r.x > lo && r.x < hi && r.jet.fxx.sign() > 0;
}

// Minimum of theta over the pair interval: negative below q_k, positive above.
PairMinimum pair_min(const Real& q, int k, const PrecisionConfig& prec) {
  return locate_pair_minimum(Parameter(q), k, prec);
}

}  // namespace

SpectralPoint find_spectral_point(int k, const PrecisionConfig& prec) {
  prec.validate();
  if (k < 1 || k > 40) throw ThetaError(ErrorKind::Domain, "spectral index must lie in [1, 40]");
  const double seed = k <= 25 ? kPublishedSpectrum[k - 1]
                              : spectral_asymptotic(k) + spectral_asymptotic_constant() / (double(k) * k);
  if (!(seed > 0.0 && seed < 1.0)) throw ThetaError(ErrorKind::SeedFailure, "spectral seed outside (0,1)");

  const int digits = pair_digits(std::max(seed - 0.05, 0.05), k, prec, kAllParts);
  PrecisionScope scope(digits);

  SpectralPoint out;
  out.k = k;
  Real q(seed);
  PairMinimum m0 = pair_min(q, k, prec);
  NewtonResult r = spectral_newton(q, m0.location, prec);
  out.iterations = r.iterations;

  if (!valid_double_zero(r, k)) {
    // Bisect on the sign of the pair minimum, then polish.
    out.used_fallback = true;
    double step = 0.002;
    Real lo(std::max(seed - step, 1e-6));
    Real hi(std::min(seed + step, 1.0 - 1e-9));
    for (int grow = 0; grow < 20; ++grow) {
      const bool lo_ok = pair_min(lo, k, prec).value.sign() < 0;
      const bool hi_ok = pair_min(hi, k, prec).value.sign() > 0;
      if (lo_ok && hi_ok) break;
      step *= 2;
      if (!lo_ok) lo = Real(std::max(seed - step, 1e-6));
      if (!hi_ok) hi = Real(std::min(seed + step, 1.0 - 1e-9));
      if (grow == 19) throw ThetaError(ErrorKind::ConvergenceFailure, "could not bracket the spectral value");
    }
    while ((hi - lo).to_double() > 1e-10) {
      Real mid = (lo + hi) / Real(2);
      if (pair_min(mid, k, prec).value.sign() < 0) {
        lo = std::move(mid);
      } else {
        hi = std::move(mid);
      }
    }
    Real qm = (lo + hi) / Real(2);
    PairMinimum m1 = pair_min(qm, k, prec);
    r = spectral_newton(qm, m1.location, prec);
    out.iterations += r.iterations;
    if (!valid_double_zero(r, k)) {
      throw ThetaError(ErrorKind::ConvergenceFailure, "Newton did not converge to the double zero y_" + std::to_string(k));
    }
  }

  out.q_tilde = r.q;
  out.y_double = r.x;
  out.residuals = {abs(r.jet.f).to_double() + r.jet.err, abs(r.jet.fx).to_double() + r.jet.err_x};
  out.theta_xx = r.jet.fxx.to_double();
  return out;
}

PsiValues eval_psi(const Real& v, const Real& y, const PrecisionConfig& prec) {
  prec.validate();
  if (!(v > Real(0) && v < Real(1))) throw ThetaError(ErrorKind::Domain, "v must lie in (0,1)");
  const double ly = y.is_zero() ? 0.0 : std::log10(std::abs(y.to_double()));
  const double lv = std::log10(v.to_double());
  const int digits = plan_theta_series(lv, 2 * ly - 0.25 * lv, prec, kJetValue | kJetDx).digits + 10;
  PrecisionScope scope(digits);
  const Real v4 = pow(v, Real(0.25));
  const Real y2 = y * y;
  const Real a = -(y2 / v4);
  const Real b = -(v4 * y2);
  ThetaJet ja = theta_jet(v, Complex(a, Real(0)), prec, kJetValue | kJetDx);
  ThetaJet jb = theta_jet(v, Complex(b, Real(0)), prec, kJetValue | kJetDx);
  const double u_arg = std::pow(10.0, -digits + 2);
  PsiValues out;
  out.psi1 = ja.value.re;
  out.psi2 = v4 * y * jb.value.re;
  out.err1 = ja.abs_error[0] + u_arg * abs(a).to_double() * abs(ja.dx).to_double();
  const double fy = abs(v4 * y).to_double();
  out.err2 = fy * (jb.abs_error[0] + u_arg * abs(b).to_double() * abs(jb.dx).to_double()) +
             u_arg * abs(out.psi2).to_double();
  return out;
}

ChiMuSequences chi_mu_sequences(const Real& v, int count, const PrecisionConfig& prec) {
  if (count < 1) throw ThetaError(ErrorKind::Domain, "count must be >= 1");
  Parameter vp(v);
  ChiMuSequences out;
  for (int k = 1; k <= count; ++k) {
    RealZero z = find_real_zero(vp, k, prec);
    PrecisionScope scope(static_cast<int>(mpfr_get_prec(z.location.raw()) / 3.32) + 5);
    const Real root = sqrt(-z.location);
    const Real v8 = pow(v, Real(0.125));
    out.chi.push_back(v8 * root);
    out.mu.push_back(root / v8);
  }
  return out;
}

namespace {

// mu_{2k2-1}(v) - chi_{2k2}(v) together with chi_{2k2}(v).
struct Crossing {
  Real d;
  Real chi;
};

Crossing crossing_gap(int k2, const Real& v, const PrecisionConfig& prec) {
  Parameter vp(v);
  RealZero odd = find_real_zero(vp, 2 * k2 - 1, prec);
  RealZero even = find_real_zero(vp, 2 * k2, prec);
  const Real v8 = pow(v, Real(0.125));
  Crossing c;
  c.chi = v8 * sqrt(-even.location);
  c.d = sqrt(-odd.location) / v8 - c.chi;
  return c;
}

}  // namespace

ImaginaryAxisSolution find_imaginary_axis_solution(int k2, const Real& v_lo, const Real& v_hi,
                                                   const PrecisionConfig& prec) {
  prec.validate();
  if (k2 < 1) throw ThetaError(ErrorKind::Domain, "k2 must be >= 1");
  if (!(v_lo > Real(0) && v_lo < v_hi && v_hi < Real(1))) {
    throw ThetaError(ErrorKind::Domain, "need 0 < v_lo < v_hi < 1");
  }
  const int digits = pair_digits(v_lo.to_double(), k2, prec, kJetValue | kJetDx | kJetDq) + 10;
  PrecisionScope scope(digits);

  Real lo = v_lo;
  Real hi = v_hi;
  Crossing c_lo, c_hi;
  try {
    c_lo = crossing_gap(k2, lo, prec);
    c_hi = crossing_gap(k2, hi, prec);
  } catch (const ThetaError& e) {
    throw ThetaError(ErrorKind::NoCrossing, std::string("crossing function undefined at an endpoint: ") + e.what());
  }
  if (!(c_lo.d.sign() < 0 && c_hi.d.sign() > 0)) {
    throw ThetaError(ErrorKind::NoCrossing, "mu_{2k2-1} - chi_{2k2} does not change sign on [v_lo, v_hi]");
  }

  ImaginaryAxisSolution out;
  out.k2 = k2;
  const Real v_tol = Real(std::pow(10.0, -prec.target_digits / 2.0));
  Crossing c_mid = c_lo;
  while (hi - lo > v_tol) {
    Real mid = (lo + hi) / Real(2);
    c_mid = crossing_gap(k2, mid, prec);
    ++out.bisection_steps;
    if (c_mid.d.sign() < 0) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }

  // Newton in (v, y) on theta(v, a) = theta(v, b) = 0 with
  // a = -v^{-1/4} y^2 and b = -v^{1/4} y^2.
  Real v = (lo + hi) / Real(2);
  Real y = crossing_gap(k2, v, prec).chi;
  const unsigned parts = kJetValue | kJetDx | kJetDq;
  const Real step_tol = Real(std::pow(10.0, -prec.target_digits - 3));
  for (int it = 0; it < 60; ++it) {
    const Real v4 = pow(v, Real(0.25));
    const Real a = -(y * y) / v4;
    const Real b = -(y * y) * v4;
    Jet2 ja = real_jet(v, a, prec, parts);
    Jet2 jb = real_jet(v, b, prec, parts);
    const Real four_v = Real(4) * v;
    const Real j11 = ja.fq - ja.fx * a / four_v;
    const Real j12 = ja.fx * Real(2) * a / y;
    const Real j21 = jb.fq + jb.fx * b / four_v;
    const Real j22 = jb.fx * Real(2) * b / y;
    const Real det = j11 * j22 - j12 * j21;
    if (det.is_zero()) break;
    const Real dv = (ja.f * j22 - j12 * jb.f) / det;
    const Real dy = (j11 * jb.f - j21 * ja.f) / det;
    v -= dv;
    y -= dy;
    if (!(v > Real(0) && v < Real(1))) throw ThetaError(ErrorKind::ConvergenceFailure, "v left (0,1) during Newton");
    if (abs(dv) <= step_tol && abs(dy) <= step_tol * abs(y)) break;
  }

  out.v_star = v;
  out.q_star = pow(v, Real(0.25));
  out.chi = y;
  PsiValues psi = eval_psi(v, y, prec);
  out.residuals = {abs(psi.psi1).to_double() + psi.err1, abs(psi.psi2).to_double() + psi.err2};

  Parameter qs(out.q_star);
  EvalResult th = eval_theta(qs, Complex(Real(0), y), prec);
  out.theta_residual = abs(th.value).to_double() + th.abs_error;
  TruncationPolynomial poly = build_truncation(qs, std::max(2.0, y.to_double() + 1.0), prec);
  out.certificate = certify_zero(poly, Complex(Real(0), y), prec);
  return out;
}

}  // namespace theta_atlas
