#include "theta_atlas/complexzeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "theta_atlas/series.hpp"
#include "theta_atlas/simd/kernels.hpp"

namespace theta_atlas {

namespace {

using cd = std::complex<double>;

constexpr int kMaxDegree = 5000;
constexpr int kTaylorTerms = 20;
constexpr int kAttempts = 3;
constexpr double kLog10Half = -0.30102999566398120;

double log10_term(int j, double lq, double lr) { return 0.5 * j * (j + 1.0) * lq + j * lr; }

// log10 of sum_{j > n} q^{j(j+1)/2} r^j, or +inf when the ratio bound fails.
// Covers rounding of bounds computed in log10 space.
constexpr double kLogSlack = 1e-9;

double log10_tail(int n, double lq, double lr) {
  const double rho = std::pow(10.0, (n + 2) * lq + lr);
  if (rho >= 1.0) return INFINITY;
  return log10_term(n + 1, lq, lr) - std::log10(1.0 - rho) + kLogSlack;
}

// log10 of sum_{j > n} j q^{j(j+1)/2} r^{j-1}.
double log10_tail_dx(int n, double lq, double lr) {
  const double rho = (n + 2.0) / (n + 1.0) * std::pow(10.0, (n + 2) * lq + lr);
  if (rho >= 1.0) return INFINITY;
  return std::log10(n + 1.0) + log10_term(n + 1, lq, lr) - lr - std::log10(1.0 - rho) + kLogSlack;
}

Real rounded(const Real& v) {
  Real r;
  mpfr_set(r.raw(), v.raw(), MPFR_RNDN);
  return r;
}

Complex rounded(const Complex& z) { return {rounded(z.re), rounded(z.im)}; }

double unit_roundoff() { return std::ldexp(1.0, -static_cast<int>(digits_to_bits(current_digits())) + 1); }

// Sum of a_j s^j for the truncation coefficients, in long double.
long double majorant(const std::vector<long double>& a, long double s) {
  long double acc = 0.0L;
  for (std::size_t j = a.size(); j-- > 0;) acc = acc * s + a[j];
  return acc;
}

std::vector<long double> coefficient_magnitudes(const TruncationPolynomial& poly) {
  std::vector<long double> a(poly.coefficients.size());
  const long double lq = std::log10(static_cast<long double>(poly.q.to_double()));
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::pow(10.0L, 0.5L * j * (j + 1.0L) * lq);
  return a;
}

std::vector<cd> newton_polygon_seeds(double q, int n, int first, double angle_offset) {
  // The coefficients q^{j(j+1)/2} are log-concave, so the root moduli are
  // close to q^{-j}, one per annulus.
  std::vector<cd> seeds;
  for (int j = first; j <= n; ++j) {
    const double r = std::pow(q, -static_cast<double>(j));
    const double phi = 2.0 * std::numbers::pi * (j - 1) / n + angle_offset;
    seeds.push_back(std::polar(r, phi));
  }
  return seeds;
}

struct AberthOutcome {
  std::vector<cd> roots;
  int iterations = 0;
  bool converged = false;
};

AberthOutcome run_aberth(const TruncationPolynomial& poly, std::vector<cd> z, int max_iterations) {
  const int n = poly.degree;
  const int digits = static_cast<int>(std::ceil(std::max(0.0, poly.log10_max_term))) + 25 +
                     static_cast<int>(std::ceil(std::log10(n + 1.0)));
  PrecisionScope scope(digits);
  std::vector<Real> a;
  a.reserve(poly.coefficients.size());
  for (const Real& c : poly.coefficients) a.push_back(rounded(c));

  std::vector<char> done(n, 0);
  std::vector<cd> w(n, 0.0);
  std::vector<double> re(n), im(n), sr(n), si(n);
  ComplexMac mac;
  Complex p, dp, zz, tmp;
  AberthOutcome out;
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) {
        w[i] = 0.0;
        continue;
      }
      zz = Complex(z[i].real(), z[i].imag());
      p = Complex(a[n], Real(0));
      dp = Complex(Real(0), Real(0));
      for (int j = n - 1; j >= 0; --j) {
        mac.horner_step(dp, zz, p);
        mac.horner_step(p, zz, a[j]);
      }
      if (dp.is_zero()) {
        w[i] = cd(1e-8 * std::abs(z[i]), 1e-8 * std::abs(z[i]));
        all_done = false;
        continue;
      }
      w[i] = (p / dp).to_cd();
      if (!std::isfinite(w[i].real()) || !std::isfinite(w[i].imag())) w[i] = 0.0;
      if (std::abs(w[i]) <= 1e-14 * std::abs(z[i])) {
        done[i] = 1;
      } else {
        all_done = false;
      }
    }
    for (int i = 0; i < n; ++i) {
      re[i] = z[i].real();
      im[i] = z[i].imag();
    }
    simd::aberth_sums(re, im, sr, si);
    for (int i = 0; i < n; ++i) {
      if (w[i] == 0.0) continue;
      const cd s(sr[i], si[i]);
      const cd denom = 1.0 - w[i] * s;
      const cd step = (std::abs(denom) > 1e-300) ? w[i] / denom : w[i];
      z[i] -= step;
    }
    if (all_done) {
      out.converged = true;
      break;
    }
  }
  out.roots = std::move(z);
  return out;
}

// Newton on the full series. Returns false if the iteration wanders off.
bool polish(const Real& q, Complex& z, const PrecisionConfig& prec, int digits) {
  PrecisionScope scope(digits);
  const double start_mod = std::max(1.0, std::abs(z.to_cd()));
  const cd start = z.to_cd();
  const double tol = std::pow(10.0, -prec.target_digits - 4) * start_mod;
  for (int it = 0; it < 40; ++it) {
    ThetaJet jet = theta_jet(q, z, prec, kJetValue | kJetDx);
    if (jet.dx.is_zero()) return false;
    if (abs(jet.value).to_double() <= jet.abs_error[0]) return true;
    Complex step = jet.value / jet.dx;
    z -= step;
    if (std::abs(z.to_cd() - start) > 0.1 * start_mod) return false;
    if (abs(step).to_double() <= tol) return true;
  }
  return false;
}

double distance(const Complex& a, const Complex& b) { return std::abs(a.to_cd() - b.to_cd()); }

}  // namespace

const char* to_string(ZeroStatus status) {
  return status == ZeroStatus::Certified ? "certified" : "near_double_uncertified";
}

int ZeroSet::real_count() const {
  return static_cast<int>(std::count_if(zeros.begin(), zeros.end(), [](const CertifiedZero& z) { return z.is_real(); }));
}

int ZeroSet::pair_count() const {
  return static_cast<int>(
      std::count_if(zeros.begin(), zeros.end(), [](const CertifiedZero& z) { return z.location.im.sign() > 0; }));
}

bool ZeroSet::all_certified() const {
  return std::all_of(zeros.begin(), zeros.end(), [](const CertifiedZero& z) { return z.certified(); });
}

TruncationPolynomial build_truncation(const Parameter& qp, double radius, const PrecisionConfig& prec) {
  prec.validate();
  if (!(radius >= 1.0) || !std::isfinite(radius)) throw ThetaError(ErrorKind::Domain, "radius must be >= 1");
  const double lq = std::log10(qp.approx());
  const double lr = std::log10(radius);
  const double threshold = -prec.target_digits - 5.0;

  int n = std::max(1, static_cast<int>(std::ceil((kLog10Half - lr) / lq)) - 1);
  while ((n + 1) * lq + lr > kLog10Half) ++n;
  while (log10_tail(n, lq, lr) > threshold) {
    ++n;
    if (n > kMaxDegree) break;
  }
  if (n > kMaxDegree) {
    throw ThetaError(ErrorKind::DegreeOverflow, "truncation degree would exceed 5000 for this q and radius");
  }

  TruncationPolynomial poly;
  poly.degree = n;
  poly.radius = radius;
  poly.tail_bound_on_disk = std::pow(10.0, log10_tail(n, lq, lr));
  double mx = 0.0;
  for (int j = 0; j <= n; ++j) mx = std::max(mx, log10_term(j, lq, lr));
  poly.log10_max_term = mx;
  poly.digits = prec.working_digits + static_cast<int>(std::ceil(mx)) +
                static_cast<int>(std::ceil(std::log10(n + 2.0))) + 10;

  PrecisionScope scope(poly.digits);
  poly.q = rounded(qp.value());
  poly.coefficients.reserve(n + 1);
  poly.coefficients.emplace_back(1);
  Real qj(1);
  for (int j = 1; j <= n; ++j) {
    qj *= poly.q;
    poly.coefficients.push_back(poly.coefficients.back() * qj);
  }
  return poly;
}

CertifiedZero certify_zero(const TruncationPolynomial& poly, const ComplexPoint& z0, const PrecisionConfig& prec) {
  const int n = poly.degree;
  const int kmax = std::min(kTaylorTerms, n);
  PrecisionScope scope(poly.digits);
  const double u = unit_roundoff();
  const double r = std::pow(10.0, -prec.target_digits / 3.0);

  Complex z = rounded(z0);
  const double az = std::abs(z.to_cd());

  // Taylor coefficients of the truncation at z by repeated synthetic division.
  std::vector<Complex> b;
  b.reserve(n + 1);
  for (const Real& c : poly.coefficients) b.emplace_back(rounded(c), Real(0));
  std::vector<long double> mag = coefficient_magnitudes(poly);
  const std::vector<long double> base = mag;
  ComplexMac mac;
  Complex t;
  std::vector<double> c_abs(kmax + 1), c_err(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    for (int j = n - 1; j >= k; --j) {
      mac.mul(t, b[j + 1], z);
      b[j] += t;
      mag[j] += static_cast<long double>(az) * mag[j + 1];
    }
    c_abs[k] = abs(b[k]).to_double();
    c_err[k] = static_cast<double>(8.0L * (n + 1) * (k + 1) * u * mag[k]);
  }

  // Coefficients beyond kmax by the Cauchy estimate on a circle of radius rho.
  const double rho = 0.5;
  const double ratio = r / rho;
  const long double m_rho = majorant(base, az + rho);
  const double rem = static_cast<double>(m_rho) * std::pow(ratio, kmax + 1) / (1.0 - ratio);
  const double rem_dx =
      static_cast<double>(m_rho) / rho * (kmax + 1) * std::pow(ratio, kmax) / ((1.0 - ratio) * (1.0 - ratio));

  // Truncation tail on |x| <= |z| + r.
  const double lq = std::log10(poly.q.to_double());
  const double ls = std::log10(std::max(az + r, poly.radius));
  const double tail = std::pow(10.0, log10_tail(n, lq, ls));
  const double tail_dx = std::pow(10.0, log10_tail_dx(n, lq, ls));

  double s2 = rem;
  double d2 = rem_dx;
  for (int k = 2; k <= kmax; ++k) {
    s2 += (c_abs[k] + c_err[k]) * std::pow(r, k);
    d2 += k * (c_abs[k] + c_err[k]) * std::pow(r, k - 1);
  }

  CertifiedZero out;
  out.location = z0;
  out.cert_radius = r;
  out.residual = c_abs[0] + c_err[0] + tail;
  out.deriv_lower = std::max(0.0, c_abs[1] - c_err[1] - d2 - tail_dx);
  out.newton_step = c_abs[1] > 0 ? c_abs[0] / c_abs[1] : INFINITY;
  const bool contraction = out.deriv_lower > 0 && out.residual / out.deriv_lower <= r && out.newton_step < r / 2;
  // Rouché: on |x - z| = r the linear term dominates everything else.
  const bool isolated = (c_abs[1] - c_err[1]) * r > out.residual + s2 + tail;
  out.status = (contraction && isolated) ? ZeroStatus::Certified : ZeroStatus::NearDoubleUncertified;
  return out;
}

ZeroSet find_all_zeros(const Parameter& qp, double radius, const PrecisionConfig& prec,
                       const ZeroSearchOptions& options) {
  prec.validate();
  if (!(radius >= 1.0 && radius <= 55.0)) throw ThetaError(ErrorKind::Domain, "radius must lie in [1, 55]");
  if (qp.approx() > 0.95) throw ThetaError(ErrorKind::Domain, "q above the 0.95 ceiling");

  const TruncationPolynomial poly = build_truncation(qp, radius, prec);
  const int n = poly.degree;
  const double q = qp.approx();
  const int polish_digits = poly.digits + 5;
  const double snap = std::pow(10.0, -prec.target_digits - 2);

  ZeroSet out;
  out.q = q;
  out.radius = radius;
  out.degree = n;

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    out.attempts = attempt + 1;
    std::vector<cd> seeds;
    const double offset = 0.7 + 1.3 * attempt;
    if (attempt == 0 && !options.warm_start.empty()) {
      seeds = options.warm_start;
      std::sort(seeds.begin(), seeds.end(), [](cd a, cd b) { return std::abs(a) < std::abs(b); });
      if (static_cast<int>(seeds.size()) > n) seeds.resize(n);
      const int have = static_cast<int>(seeds.size());
      std::vector<cd> extra = newton_polygon_seeds(q, n, have + 1, offset);
      seeds.insert(seeds.end(), extra.begin(), extra.end());
    } else {
      seeds = newton_polygon_seeds(q, n, 1, offset);
    }
    AberthOutcome ab = run_aberth(poly, std::move(seeds), options.max_iterations);
    out.iterations += ab.iterations;
    out.truncation_roots = ab.roots;

    std::vector<Complex> reals, uppers, lowers;
    std::vector<char> polished_ok;
    bool polish_failed = false;
    for (const cd& root : ab.roots) {
      if (!(std::abs(root) < radius * 1.001)) continue;
      Complex z;
      {
        PrecisionScope scope(polish_digits);
        z = Complex(root.real(), root.imag());
      }
      if (!polish(poly.q, z, prec, polish_digits)) polish_failed = true;
      const double mod = std::abs(z.to_cd());
      if (!(mod < radius)) continue;
      if (std::abs(z.im.to_double()) <= snap * std::max(1.0, mod)) {
        z.im = Real(0);
        polish(poly.q, z, prec, polish_digits);
        reals.push_back(std::move(z));
      } else if (z.im.sign() > 0) {
        uppers.push_back(std::move(z));
      } else {
        lowers.push_back(std::move(z));
      }
    }

    // Pair each lower root with an upper one.
    const double match_tol = 1e-12;
    std::vector<char> upper_matched(uppers.size(), 0);
    bool consistent = !polish_failed;
    for (const Complex& lo : lowers) {
      Complex c = conj(lo);
      bool found = false;
      for (std::size_t i = 0; i < uppers.size(); ++i) {
        if (!upper_matched[i] && distance(c, uppers[i]) <= match_tol * std::max(1.0, std::abs(c.to_cd()))) {
          upper_matched[i] = 1;
          found = true;
          break;
        }
      }
      if (!found) {
        uppers.push_back(std::move(c));
        upper_matched.push_back(1);
        consistent = false;
      }
    }
    for (char m : upper_matched) consistent = consistent && m;

    // Two candidates polished onto the same zero mean one zero was missed.
    std::vector<Complex> distinct = reals;
    distinct.insert(distinct.end(), uppers.begin(), uppers.end());
    bool duplicates = false;
    for (std::size_t i = 0; i < distinct.size() && !duplicates; ++i) {
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        const double scale = std::max(1.0, std::abs(distinct[i].to_cd()));
        if (distance(distinct[i], distinct[j]) <= 1e-9 * scale) {
          duplicates = true;
          break;
        }
      }
    }

    std::sort(reals.begin(), reals.end(), [](const Complex& a, const Complex& b) { return a.re > b.re; });
    std::sort(uppers.begin(), uppers.end(), [](const Complex& a, const Complex& b) {
      const double ma = std::abs(a.to_cd()), mb = std::abs(b.to_cd());
      if (ma != mb) return ma < mb;
      return a.re < b.re;
    });

    out.zeros.clear();
    for (const Complex& z : reals) out.zeros.push_back(certify_zero(poly, z, prec));
    for (const Complex& z : uppers) {
      CertifiedZero up = certify_zero(poly, z, prec);
      CertifiedZero lo = up;
      lo.location = conj(up.location);
      out.zeros.push_back(std::move(up));
      out.zeros.push_back(std::move(lo));
    }
    if (duplicates) {
      for (CertifiedZero& z : out.zeros) z.status = ZeroStatus::NearDoubleUncertified;
    }
    if (ab.converged && consistent && !duplicates) break;
  }
  return out;
}

int count_pairs(const Parameter& q, const PrecisionConfig& prec) {
  ZeroSet zs = find_all_zeros(q, 55.0, prec);
  if (!zs.all_certified()) {
    throw ThetaError(ErrorKind::AmbiguousNearSpectral, "some zero could not be certified; q is too close to a spectral value");
  }
  return zs.pair_count();
}

}  // namespace theta_atlas
