#include "theta_atlas/regions.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "theta_atlas/realzeros.hpp"
#include "theta_atlas/series.hpp"
#include "theta_atlas/simd/kernels.hpp"
#include "theta_atlas/spectrum.hpp"

namespace theta_atlas {

namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kT3Radius = 49.8;
constexpr int kSweepBlock = 8;
constexpr double kKatsnelsonLo = 0.32;

int sweep_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("THETA_ATLAS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n > 0 ? n : cap, cap);
  }
  return std::max(n, 1);
}

cd to_cd(const ComplexPoint& z) { return {z.re.to_double(), z.im.to_double()}; }

double log_qln2(double q) {
  const double l = std::log(q);
  return q * l * l;
}

}  // namespace

const char* to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::HalfAnnulusA: return "half_annulus_A";
    case RegionKind::DomainD: return "domain_D";
    case RegionKind::DomainEPlus: return "domain_E_plus";
    case RegionKind::KatsnelsonInterior: return "katsnelson_interior";
    case RegionKind::Disk: return "disk";
    case RegionKind::LeftHalfDisk: return "left_half_disk";
  }
  return "unknown";
}

bool contains(const Region& region, const ComplexPoint& z) {
  const Real n = norm(z);
  switch (region.kind) {
    case RegionKind::HalfAnnulusA:
      return z.re.sign() >= 0 && n > Real(1) && n < Real(25);
    case RegionKind::DomainD:
      return n <= Real(9) && z.re.sign() <= 0 && Real(2) * z.im * z.im <= Real(9);
    case RegionKind::DomainEPlus: {
      const bool strip = z.re > Real(std::string_view("-5792.7")) && z.re.sign() < 0 && abs(z.im) < Real(132);
      return strip || n < Real(324);
    }
    case RegionKind::KatsnelsonInterior:
      if (z.re.is_zero() && z.im.is_zero()) return true;
      return sqrt(n) < exp(abs(arg(z)));
    case RegionKind::Disk:
      return n < Real(region.radius) * Real(region.radius);
    case RegionKind::LeftHalfDisk:
      return z.re.sign() < 0 && n < Real(region.radius) * Real(region.radius);
  }
  return false;
}

bool contains(const Region& region, cd z) {
  PrecisionScope scope(30);
  return contains(region, ComplexPoint(z));
}

double boundary_margin(const Region& region, cd z) {
  const double r = std::abs(z);
  switch (region.kind) {
    case RegionKind::HalfAnnulusA:
      return std::min({r - 1.0, 5.0 - r, z.real()});
    case RegionKind::DomainD:
      return std::min({3.0 - r, -z.real(), 3.0 / std::sqrt(2.0) - std::abs(z.imag())});
    case RegionKind::DomainEPlus:
      return std::max(std::min({z.real() + 5792.7, -z.real(), 132.0 - std::abs(z.imag())}), 18.0 - r);
    case RegionKind::KatsnelsonInterior:
      return std::exp(std::abs(std::arg(z))) - r;
    case RegionKind::Disk:
      return region.radius - r;
    case RegionKind::LeftHalfDisk:
      return std::min(-z.real(), region.radius - r);
  }
  return 0.0;
}

std::vector<cd> katsnelson_contour(int points) {
  std::vector<cd> out;
  if (points < 2) return out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = kPi * i / (points - 1);
    out.push_back(std::polar(std::exp(t), t));
  }
  return out;
}

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2b: return "T2b";
    case TheoremId::T3: return "T3";
  }
  return "unknown";
}

std::optional<TheoremId> parse_theorem(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "t1") return TheoremId::T1;
  if (s == "t2b") return TheoremId::T2b;
  if (s == "t3") return TheoremId::T3;
  return std::nullopt;
}

double t2b_q_limit() { return std::pow(0.2, 0.25); }

std::vector<QZeros> sweep_zeros(const std::vector<double>& q_grid, double radius_cap, const PrecisionConfig& prec) {
  prec.validate();
  for (double q : q_grid) {
    if (!(q > 0.0 && q <= 0.95)) throw ThetaError(ErrorKind::Domain, "sweep grid must lie in (0, 0.95]");
  }
  if (!(radius_cap >= 1.0 && radius_cap <= 55.0)) throw ThetaError(ErrorKind::Domain, "radius cap must lie in [1, 55]");

  std::vector<QZeros> out(q_grid.size());
  const int blocks = static_cast<int>((q_grid.size() + kSweepBlock - 1) / kSweepBlock);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next++; b < blocks; b = next++) {
      std::vector<cd> warm;
      const std::size_t end = std::min(q_grid.size(), static_cast<std::size_t>(b + 1) * kSweepBlock);
      for (std::size_t i = static_cast<std::size_t>(b) * kSweepBlock; i < end; ++i) {
        out[i].q = q_grid[i];
        try {
          ZeroSearchOptions opts;
          opts.warm_start = warm;
          ZeroSet zs = find_all_zeros(Parameter(q_grid[i]), radius_cap, prec, opts);
          warm = zs.truncation_roots;
          out[i].zeros = std::move(zs);
        } catch (const std::exception& e) {
          out[i].error = e.what();
          warm.clear();
        }
      }
    }
  };
  const int n = std::min(sweep_threads(), std::max(blocks, 1));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

RegionReport verify_theorem(TheoremId theorem, const std::vector<QZeros>& inventory) {
  RegionReport rep;
  rep.theorem = theorem;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  double radius = 55.0;
  for (const auto& entry : inventory) {
    rep.q_grid.push_back(entry.q);
    if (entry.zeros) radius = entry.zeros->radius;
  }
  switch (theorem) {
    case TheoremId::T1: rep.region = Region::half_annulus_a(); break;
    case TheoremId::T2b: rep.region = Region::left_half_disk(radius); break;
    case TheoremId::T3: rep.region = Region::left_half_disk(kT3Radius); break;
  }
  if (theorem == TheoremId::T2b) {
    for (double q : rep.q_grid) {
      if (q > t2b_q_limit()) throw ThetaError(ErrorKind::Domain, "T2b applies to q <= 0.2^{1/4} only");
    }
  }

  const Region kats = Region::katsnelson_interior();
  const Region eplus = Region::domain_e_plus();
  for (const auto& entry : inventory) {
    if (!entry.zeros) {
      rep.warnings.push_back({entry.q, entry.error});
      continue;
    }
    for (const auto& z : entry.zeros->zeros) {
      const cd w = to_cd(z.location);
      if (!z.certified()) {
        rep.warnings.push_back({entry.q, std::string("near_double_uncertified zero near ") +
                                             std::to_string(w.real()) + (w.imag() < 0 ? "" : "+") +
                                             std::to_string(w.imag()) + "i"});
        continue;
      }
      const bool right = z.location.re.sign() >= 0;
      if (!z.is_real()) {
        double& max_mod = right ? rep.max_modulus_right : rep.max_modulus_left;
        max_mod = std::max(max_mod, std::abs(w));
        if (entry.q >= kKatsnelsonLo && !contains(kats, z.location)) {
          rep.outside_katsnelson.push_back({entry.q, w, boundary_margin(kats, w)});
        }
        if (!contains(eplus, z.location)) rep.outside_e_plus.push_back({entry.q, w, boundary_margin(eplus, w)});
      }

      bool tested = false;
      bool inside = true;
      double margin = 0.0;
      switch (theorem) {
        case TheoremId::T1:
          if (right) {
            tested = true;
            inside = contains(rep.region, z.location);
            margin = boundary_margin(rep.region, w);
          }
          break;
        case TheoremId::T2b:
          tested = true;
          inside = !right;
          margin = -w.real();
          break;
        case TheoremId::T3:
          if (!right && !z.is_real()) {
            tested = true;
            inside = contains(rep.region, z.location);
            margin = kT3Radius - std::abs(w);
          }
          break;
      }
      if (!tested) continue;
      ++rep.tested_zeros;
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (!inside) rep.violations.push_back({entry.q, w, margin});
    }
  }
  rep.zero_inventory = inventory;
  return rep;
}

RegionReport verify_theorem(TheoremId theorem, const std::vector<double>& q_grid, double radius_cap,
                            const PrecisionConfig& prec) {
  if (q_grid.empty()) throw ThetaError(ErrorKind::Domain, "empty q grid");
  if (theorem == TheoremId::T2b) {
    for (double q : q_grid) {
      if (q > t2b_q_limit()) throw ThetaError(ErrorKind::Domain, "T2b applies to q <= 0.2^{1/4} only");
    }
  }
  return verify_theorem(theorem, sweep_zeros(q_grid, radius_cap, prec));
}

RealEstimate eval_S(const Parameter& qp, const PrecisionConfig& prec) {
  prec.validate();
  PrecisionScope scope(prec.working_digits);
  const Real& q = qp.value();
  const double qd = qp.approx();
  const double stop = std::pow(10.0, -prec.target_digits - 5);
  Real sum(0), qm(1);  // qm = q^{m-1}
  RealEstimate out;
  double tail = INFINITY;
  int m = 1;
  for (;; ++m) {
    Real qnext = qm * q;
    Real term = Real(2 * m) * qm / (Real(1) - qnext);
    sum -= term;
    qm = std::move(qnext);
    const double r = qd * (m + 2.0) / (m + 1.0);
    if (r < 1.0) {
      tail = term.to_double() * qd * (m + 1.0) / m / (1.0 - r);
      if (tail < stop) break;
    }
  }
  out.terms_used = m;
  out.abs_error = tail + 4.0 * m * std::pow(10.0, -prec.working_digits) * std::abs(sum.to_double());
  out.value = std::move(sum);
  return out;
}

RealEstimate eval_W(const Parameter& qp, const PrecisionConfig& prec) {
  prec.validate();
  PrecisionScope scope(prec.working_digits);
  const Real& q = qp.value();
  const double qd = qp.approx();
  const double q2 = qd * qd;
  const double stop = std::pow(10.0, -prec.target_digits - 5);
  const Real a = Real(626) / Real(25);
  const Real q2r = q * q;
  Real sum(0);
  Real q2m(1);  // q^{2m}
  double bound_m = 0.0;  // 27.04 * 2m q^{2m-1}
  int m = 1;
  double tail = INFINITY;
  for (;; ++m) {
    q2m *= q2r;
    Real q4m = q2m * q2m;
    Real term = (a + Real(2) * q2m) * Real(2 * m) * q2m / q / (Real(1) + a * q2m + q4m);
    sum += term;
    bound_m = 27.04 * 2.0 * m * q2m.to_double() / qd;
    const double r = q2 * (m + 2.0) / (m + 1.0);
    if (r < 1.0) {
      tail = bound_m * q2 * (m + 1.0) / m / (1.0 - r);
      if (tail < stop) break;
    }
  }
  RealEstimate out;
  out.terms_used = m;
  out.abs_error = tail + 8.0 * m * std::pow(10.0, -prec.working_digits) * std::abs(sum.to_double());
  out.value = std::move(sum);
  return out;
}

double s_bound(double q) { return kPi * kPi / (3.0 * log_qln2(q)); }

double w_bound(double q) { return 4.46 / log_qln2(q); }

double u_function(double t) {
  const double e1 = std::exp(t), e2 = e1 * e1, e3 = e2 * e1;
  return 625.0 * e3 + 7825.0 * t * e2 + 23475.0 * e2 + 1250.0 * t * e1 + 196563.0 * e1 + 7825.0 * t + 7825.0;
}

double w_integrand(double t) {
  const double e1 = std::exp(-t), e2 = e1 * e1;
  const double a = 626.0 / 25.0;
  return t * (a * e1 + 2.0 * e2) / (1.0 + a * e1 + e2);
}

ProofConstants proof_constants(const PrecisionConfig& prec) {
  prec.validate();
  ProofConstants c;

  double lo = -5.0, hi = 0.0;
  if (!(u_function(lo) < 0.0 && u_function(hi) > 0.0)) {
    throw ThetaError(ErrorKind::NoCrossing, "U does not change sign on (-5, 0)");
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon(); ++i) {
    const double mid = 0.5 * (lo + hi);
    (u_function(mid) < 0.0 ? lo : hi) = mid;
  }
  c.zeta0 = 0.5 * (lo + hi);

  // integrand <= 27.04 t e^{-t}, whose integral over (T, inf) is 27.04 (T + 1) e^{-T}
  constexpr double kTailBudget = 1e-12;
  constexpr double kTolerance = 1e-10;
  double t_max = 1.0;
  while (27.04 * (t_max + 1.0) * std::exp(-t_max) >= kTailBudget) t_max += 1.0;
  c.truncation = t_max;
  c.tail_bound = 27.04 * (t_max + 1.0) * std::exp(-t_max);
  if (c.tail_bound > kTailBudget) throw ThetaError(ErrorKind::QuadratureFailure, "tail bound exceeds budget");
  double err = 0.0;
  c.kappa = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(w_integrand, 0.0, t_max, 30,
                                                                          kTolerance / 10.0, &err);
  c.kappa_error = err * std::abs(c.kappa) + c.tail_bound;
  if (c.kappa_error > kTolerance) throw ThetaError(ErrorKind::QuadratureFailure, "quadrature error above 1e-10");
  c.r0 = w_integrand(std::abs(c.zeta0));
  return c;
}

PropMainReport check_propmain(const std::vector<double>& q_grid, const PrecisionConfig& prec) {
  prec.validate();
  PropMainReport rep;
  const double h = rep.step;
  const ComplexPoint x(0.0, 5.0);
  auto sq = [&](double q) {
    EvalResult r = eval_theta_star(Parameter(q), x, prec);
    PrecisionScope scope(prec.working_digits);
    return norm(r.value);
  };
  rep.derivative_positive = true;
  rep.modulus_increasing = true;
  for (double q : q_grid) {
    if (!(q >= 0.5 && q <= 0.99)) throw ThetaError(ErrorKind::Domain, "q grid must lie in [0.5, 0.99]");
    PropMainRow row;
    row.q = q;
    row.modulus = std::sqrt(sq(q).to_double());
    Real diff = sq(q + h) - sq(q - h);
    row.derivative = diff.to_double() / (2.0 * h);
    if (!(row.derivative > 0.0)) rep.derivative_positive = false;
    if (!rep.rows.empty() && !(row.modulus > rep.rows.back().modulus)) rep.modulus_increasing = false;
    rep.rows.push_back(row);
  }
  return rep;
}

BoundReport check_sw_bounds(const std::vector<double>& q_grid, const PrecisionConfig& prec) {
  BoundReport rep;
  rep.s_bound_holds = rep.w_bound_holds = rep.sum_positive = true;
  rep.worst_w_ratio = INFINITY;
  for (double q : q_grid) {
    if (!(q >= 0.5 && q < 1.0)) throw ThetaError(ErrorKind::Domain, "q grid must lie in [0.5, 1)");
    BoundRow row;
    row.q = q;
    row.s = eval_S(Parameter(q), prec).value.to_double();
    row.w = eval_W(Parameter(q), prec).value.to_double();
    row.s_bound = s_bound(q);
    row.w_bound = w_bound(q);
    if (!(std::abs(row.s) <= row.s_bound)) rep.s_bound_holds = false;
    if (!(row.w > row.w_bound)) rep.w_bound_holds = false;
    if (!(row.s + row.w > 0.0)) rep.sum_positive = false;
    const double ratio = row.w / row.w_bound;
    if (ratio < rep.worst_w_ratio) {
      rep.worst_w_ratio = ratio;
      rep.worst_w_q = q;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

ArcReport check_arc_minimality(const Parameter& qp, double radius, int samples) {
  const double q = qp.approx();
  if (!(q >= 0.5 && q < 1.0)) throw ThetaError(ErrorKind::Domain, "q must lie in [0.5, 1)");
  if (!(radius >= 5.0)) throw ThetaError(ErrorKind::Domain, "radius must be >= 5");
  if (samples < 3) throw ThetaError(ErrorKind::Domain, "need at least 3 samples");
  const double lq = -std::log(q);
  const double rmax = std::max(radius, 50.0);
  if (std::log(rmax) * std::log(rmax) / (2.0 * lq) > 600.0) {
    throw ThetaError(ErrorKind::Domain, "Theta* overflows double precision for this q and radius");
  }

  ArcReport rep;
  rep.q = q;
  rep.radius = radius;
  rep.samples = samples;
  rep.angle_step = kPi / (samples - 1);

  std::vector<double> re(samples), im(samples), ore(samples), oim(samples);
  for (int i = 0; i < samples; ++i) {
    const double phi = -kPi / 2 + rep.angle_step * i;
    re[i] = radius * std::cos(phi);
    im[i] = radius * std::sin(phi);
  }
  simd::theta_star_batch(q, re, im, ore, oim);
  int best = 0;
  for (int i = 0; i < samples; ++i) {
    if (std::hypot(ore[i], oim[i]) < std::hypot(ore[best], oim[best])) best = i;
  }
  rep.min_modulus = std::hypot(ore[best], oim[best]);
  rep.argmin_angle = -kPi / 2 + rep.angle_step * best;
  rep.minimum_on_axis = std::abs(std::abs(rep.argmin_angle) - kPi / 2) <= rep.angle_step * (1.0 + 1e-9);

  // radial sweep along the imaginary axis
  for (int i = 0; i < samples; ++i) {
    re[i] = 0.0;
    im[i] = 5.0 + 45.0 * i / (samples - 1);
  }
  simd::theta_star_batch(q, re, im, ore, oim);
  rep.radial_nondecreasing = true;
  double prev = 0.0;
  int rbest = 0;
  for (int i = 0; i < samples; ++i) {
    const double m = std::hypot(ore[i], oim[i]);
    if (i > 0 && m < prev * (1.0 - 1e-12)) rep.radial_nondecreasing = false;
    if (m < std::hypot(ore[rbest], oim[rbest])) rbest = i;
    prev = m;
  }
  rep.radial_min_radius = im[rbest];
  return rep;
}

CircleReport check_circle_lemma(const Parameter& qp, double x0, int samples, const PrecisionConfig& prec) {
  if (!(x0 < -5.0)) throw ThetaError(ErrorKind::Domain, "x0 must be < -5");
  if (samples < 4) throw ThetaError(ErrorKind::Domain, "need at least 4 samples");
  const double q = qp.approx();
  CircleReport rep;
  rep.q = q;
  rep.x0 = x0;
  EvalResult t = eval_theta(qp, ComplexPoint(x0, 0.0), prec);
  rep.theta_x0 = t.value.re;
  rep.theta_x0_error = t.abs_error;
  const double tv = rep.theta_x0.to_double();
  if (std::abs(tv) - t.abs_error < 1.0) {
    throw ThetaError(ErrorKind::PreconditionUnmet, "|theta(q, x0)| < 1");
  }
  rep.floor = tv <= -1.0 ? 0.75 : 0.55;

  const double r = -x0;
  std::vector<double> re(samples), im(samples), tre(samples), tim(samples), sre(samples), sim(samples);
  for (int i = 0; i < samples; ++i) {
    const double phi = 2.0 * kPi * i / samples;
    re[i] = -r * std::cos(phi);
    im[i] = r * std::sin(phi);
  }
  simd::theta_decomposed_batch(q, re, im, tre, tim);
  simd::theta_star_batch(q, re, im, sre, sim);
  const double star0 = std::hypot(sre[0], sim[0]);
  rep.min_modulus = INFINITY;
  rep.star_minimal_at_x0 = true;
  for (int i = 0; i < samples; ++i) {
    const double m = std::hypot(tre[i], tim[i]);
    if (m < rep.min_modulus) {
      rep.min_modulus = m;
      rep.argmin = {re[i], im[i]};
    }
    if (std::hypot(sre[i], sim[i]) < star0 * (1.0 - 1e-12)) rep.star_minimal_at_x0 = false;
  }
  rep.passed = rep.min_modulus > rep.floor;
  return rep;
}

double phi_c1(double q) {
  const double q2 = q * q;
  return q2 * q2 * q2 * (1.0 + q2) / ((1.0 - q2) * (1.0 - q2 * q2));
}

double delta_c1(double q) { return std::pow(2.0, -4.5) * 2.0 * q * q * q / (1.0 - q * q); }

double rho0() { return std::pow(2.0, 5.5); }

double c1_margin(double q) {
  const double r = rho0();
  return q * q * q - phi_c1(q) - 1.0 / (r * r) - delta_c1(q);
}

C1Report check_c1_coefficient_argument(const Parameter& qp, const PrecisionConfig& prec) {
  prec.validate();
  const double qd = qp.approx();
  if (!(qd > kPublishedSpectrum[0] && qd <= 0.5)) {
    throw ThetaError(ErrorKind::Domain, "q must lie in (q_1, 0.5]");
  }
  constexpr int kZeros = 60;
  C1Report rep;
  rep.q = qd;

  ZeroSet zs = find_all_zeros(qp, 55.0, prec);
  std::vector<const CertifiedZero*> pair;
  for (const auto& z : zs.zeros) {
    if (!z.is_real()) pair.push_back(&z);
  }
  if (pair.size() != 2) throw ThetaError(ErrorKind::PreconditionUnmet, "expected exactly one complex pair");
  RealZeroList reals = list_real_zeros(qp, kZeros - 2, prec);
  if (reals.short_count || reals.first_index != 3) {
    throw ThetaError(ErrorKind::ConvergenceFailure, "could not list the real zeros xi_3..xi_60");
  }

  PrecisionScope scope(prec.working_digits + 10);
  Real e1(0), p2(0);
  double err = 0.0;
  for (const auto* z : pair) {
    Complex inv = Complex(Real(1), Real(0)) / z->location;
    e1 += inv.re;
    Complex sq = inv * inv;
    p2 += sq.re;
  }
  const cd c = to_cd(pair[0]->location);
  rep.pair = c.imag() > 0 ? c : std::conj(c);
  for (const auto& z : reals.zeros) {
    Real inv = Real(1) / z.location;
    e1 += inv;
    p2 += inv * inv;
    const double il = std::abs(inv.to_double());
    err += z.location_error * il * il * (2.0 * std::abs(e1.to_double()) + 2.0 * il);
  }
  const Real& q = qp.value();
  // remaining zeros xi_k, k > 60, with xi_k q^k close to -1 and |1/xi_k| < q^{k-1}
  const Real qn = pow(q, static_cast<long>(kZeros));
  const Real e1_tail = -qn * q / (Real(1) - q);
  const Real p2_tail = qn * qn * q * q / (Real(1) - q * q);
  const double tail_bound = qn.to_double() / (1.0 - qd);
  e1 += e1_tail;
  p2 += p2_tail;
  rep.s2 = (e1 * e1 - p2) / Real(2);
  rep.s2_error = err + 2.0 * tail_bound * (std::abs(e1.to_double()) + tail_bound) + tail_bound * tail_bound +
                 std::pow(10.0, -prec.target_digits);
  rep.identity_residual = std::abs((q * q * q - rep.s2).to_double());
  rep.zeros_used = static_cast<int>(pair.size() + reals.zeros.size());

  rep.phi = phi_c1(qd);
  rep.delta = delta_c1(qd);
  rep.margin = c1_margin(qd);
  rep.min_margin = INFINITY;
  constexpr int kScan = 2000;
  for (int i = 0; i <= kScan; ++i) {
    const double x = 0.3 + 0.2 * i / kScan;
    const double m = c1_margin(x);
    if (m < rep.min_margin) {
      rep.min_margin = m;
      rep.min_margin_q = x;
    }
  }
  rep.margin_positive = rep.min_margin > 0.0;
  return rep;
}

TauReport check_tau_lemma(const PrecisionConfig& prec) {
  prec.validate();
  TauReport rep;
  // Decimal inputs so that q and the exponents are exact to working precision.
  auto decimal = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return Real(std::string_view(buf));
  };
  auto tau = [&](double qd, const char* e, double* err) {
    PrecisionScope scope(prec.working_digits + 20);
    const Real q = decimal(qd);
    Real x = -pow(q, -Real(std::string_view(e)));
    EvalResult r = eval_theta(Parameter(q), ComplexPoint(std::move(x), Real(0)), prec);
    if (err) *err = r.abs_error;
    return r.value.re;
  };
  rep.tau1 = tau(0.2, "1.2", &rep.tau1_error);
  rep.tau2 = tau(0.2, "1.8", &rep.tau2_error);
  {
    PrecisionScope scope(prec.working_digits + 20);
    const Real q = decimal(0.2);
    rep.leibniz_a = rep.tau1 - Real(1) + pow(q, -Real(std::string_view("0.2")));
    rep.leibniz_b = rep.tau2 - Real(1) + pow(q, -Real(std::string_view("0.8")));
  }
  rep.tau1_increasing = rep.tau2_increasing = true;
  for (int i = 1; i <= 20; ++i) {
    const double q = 0.01 * i;
    rep.grid.push_back(q);
    rep.tau1_grid.push_back(tau(q, "1.2", nullptr).to_double());
    rep.tau2_grid.push_back(tau(q, "1.8", nullptr).to_double());
    if (i > 1) {
      if (!(rep.tau1_grid[i - 1] > rep.tau1_grid[i - 2])) rep.tau1_increasing = false;
      if (!(rep.tau2_grid[i - 1] > rep.tau2_grid[i - 2])) rep.tau2_increasing = false;
    }
  }
  return rep;
}

std::vector<std::pair<int, double>> spectral_disk_radii() {
  std::vector<std::pair<int, double>> out;
  for (int s = 4; s <= 25; ++s) out.emplace_back(s, std::pow(kPublishedSpectrum[s - 1], -2.0 * s - 3.0));
  return out;
}

}  // namespace theta_atlas
