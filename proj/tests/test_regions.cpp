#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "theta_atlas/realzeros.hpp"
#include "theta_atlas/regions.hpp"
#include "theta_atlas/series.hpp"
#include "theta_atlas/spectrum.hpp"

using namespace theta_atlas;
using test::d;
using cd = std::complex<double>;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double q = lo + i * step;
    if (q > hi + 1e-9) break;
    out.push_back(std::round(q * 1e12) / 1e12);
  }
  return out;
}

}  // namespace

TEST_CASE("half-annulus membership") {
  const Region a = Region::half_annulus_a();
  CHECK(contains(a, cd(0.0, 3.0)));
  CHECK_FALSE(contains(a, cd(0.0, 0.5)));
  CHECK_FALSE(contains(a, cd(0.0, 5.0)));
  CHECK_FALSE(contains(a, cd(-0.1, 3.0)));
  CHECK(contains(a, cd(0.0, -1.0001)));
  CHECK(contains(a, ComplexPoint(0.6128998489, 2.37247194)));
}

TEST_CASE("domain D and A meet only on the imaginary axis") {
  const Region dom = Region::domain_d();
  const Region a = Region::half_annulus_a();
  for (int i = -60; i <= 60; ++i) {
    for (int j = -60; j <= 60; ++j) {
      const cd z(i * 0.1, j * 0.1);
      if (contains(dom, z)) {
        CHECK(z.real() <= 0.0);
        // Both sets are closed towards Re x = 0.
        if (contains(a, z)) CHECK(z.real() == 0.0);
      }
    }
  }
  CHECK(contains(dom, cd(-1.0, 2.0)));
  CHECK(contains(dom, cd(0.0, 2.0)));
  CHECK(contains(a, cd(0.0, 2.0)));
  CHECK_FALSE(contains(dom, cd(-0.5, 2.2)));
  CHECK_FALSE(contains(dom, cd(-2.5, 1.8)));
}

TEST_CASE("domain E+ membership") {
  const Region e = Region::domain_e_plus();
  CHECK(contains(e, cd(-5000.0, 100.0)));
  CHECK_FALSE(contains(e, cd(-6000.0, 1.0)));
  CHECK_FALSE(contains(e, cd(-20.0, 140.0)));
  CHECK(contains(e, cd(10.0, 10.0)));
  CHECK_FALSE(contains(e, cd(20.0, 0.0)));
}

TEST_CASE("Katsnelson contour boundary points") {
  const Region k = Region::katsnelson_interior();
  // e^{(pi/4)(1+i)}
  CHECK(std::abs(boundary_margin(k, cd(1.550883197, 1.550883197))) < 1e-9);
  const double e = std::exp(M_PI / 4.0);
  CHECK(e * std::cos(M_PI / 4.0) == doctest::Approx(1.550883197).epsilon(1e-9));
  // e^{(3pi/4)(1+i)}, where the contour has a horizontal tangent.
  const double w = std::exp(3.0 * M_PI / 4.0) * std::cos(3.0 * M_PI / 4.0);
  CHECK(w == doctest::Approx(-7.460488536).epsilon(1e-9));
  CHECK(std::abs(boundary_margin(k, cd(w, -w))) < 1e-9);
  CHECK(contains(k, cd(w, -w * 0.999)));
  CHECK_FALSE(contains(k, cd(w, -w * 1.001)));
  // The top of the contour: moving horizontally from the tangent point stays outside.
  CHECK_FALSE(contains(k, cd(w + 0.05, -w + 1e-3)));
  CHECK_FALSE(contains(k, cd(w - 0.05, -w + 1e-3)));
  CHECK(contains(k, cd(-2.0, 0.0)));
  CHECK_FALSE(contains(k, cd(2.0, 0.0)));
  CHECK(contains(k, cd(0.5, 0.0)));
}

TEST_CASE("Katsnelson contour samples lie on the boundary") {
  for (const cd& z : katsnelson_contour(50)) {
    CHECK(std::abs(boundary_margin(Region::katsnelson_interior(), z)) < 1e-9);
  }
}

TEST_CASE("exact and double predicates agree") {
  const Region regions[] = {Region::half_annulus_a(), Region::domain_d(), Region::domain_e_plus(),
                            Region::katsnelson_interior(), Region::left_half_disk()};
  for (const Region& r : regions) {
    for (int i = 0; i < 50; ++i) {
      const cd z(-30.0 + 1.3 * i, 0.7 * i - 10.0);
      CHECK(contains(r, z) == contains(r, ComplexPoint(z)));
    }
  }
}

TEST_CASE("theorem parsing") {
  CHECK(parse_theorem("T1") == TheoremId::T1);
  CHECK(parse_theorem("t2b") == TheoremId::T2b);
  CHECK(parse_theorem("T3") == TheoremId::T3);
  CHECK_FALSE(parse_theorem("T4").has_value());
  CHECK(t2b_q_limit() == doctest::Approx(0.6687403050).epsilon(1e-10));
}

TEST_CASE("no zero with nonnegative real part for small q") {
  RegionReport r = verify_theorem(TheoremId::T2b, grid(0.05, 0.66, 0.01));
  CHECK(r.passed());
  CHECK(r.warnings.empty());
  CHECK(r.tested_zeros > 0);
  CHECK(r.worst_margin > 0.0);
  CHECK(r.q_grid.size() == 62);
}

TEST_CASE("right half-plane zeros lie in the half-annulus on a coarse grid") {
  const std::vector<double> g = grid(0.68, 0.95, 0.03);
  std::vector<QZeros> inv = sweep_zeros(g, 55.0);
  RegionReport t1 = verify_theorem(TheoremId::T1, inv);
  CHECK(t1.passed());
  CHECK(t1.max_modulus_right < 5.0);
  CHECK(t1.max_modulus_right > 1.0);
  RegionReport t3 = verify_theorem(TheoremId::T3, inv);
  CHECK(t3.passed());
  CHECK(t3.max_modulus_left < 49.8);
  CHECK(t3.outside_e_plus.empty());
}

TEST_CASE("sweep results do not depend on the thread count") {
  const std::vector<double> g = grid(0.5, 0.9, 0.02);
  setenv("THETA_ATLAS_THREADS", "1", 1);
  std::vector<QZeros> one = sweep_zeros(g, 30.0);
  setenv("THETA_ATLAS_THREADS", "4", 1);
  std::vector<QZeros> four = sweep_zeros(g, 30.0);
  unsetenv("THETA_ATLAS_THREADS");
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].zeros.has_value());
    REQUIRE(four[i].zeros.has_value());
    REQUIRE(one[i].zeros->zeros.size() == four[i].zeros->zeros.size());
    for (std::size_t j = 0; j < one[i].zeros->zeros.size(); ++j) {
      CHECK(one[i].zeros->zeros[j].location.re == four[i].zeros->zeros[j].location.re);
      CHECK(one[i].zeros->zeros[j].location.im == four[i].zeros->zeros[j].location.im);
    }
  }
}

TEST_CASE("S(0.5) agrees with direct summation") {
  const Parameter q(0.5);
  RealEstimate s = eval_S(q);
  const oracle::Dec ref = oracle::s_sum(oracle::dec(q.value()), 500);
  CHECK(oracle::distance(s.value, ref) <= s.abs_error + 1e-40);
  CHECK(s.value < Real(0));
}

TEST_CASE("W(0.7) agrees with direct summation") {
  const Parameter q(0.7);
  RealEstimate w = eval_W(q);
  const oracle::Dec ref = oracle::w_sum(oracle::dec(q.value()), 500);
  CHECK(oracle::distance(w.value, ref) <= w.abs_error + 1e-40);
  CHECK(w.value > Real(0));
}

TEST_CASE("S bound holds and the claimed W bound is checked against the oracle") {
  const std::vector<double> g = grid(0.5, 0.99, 0.01);
  BoundReport r = check_sw_bounds(g);
  REQUIRE(r.rows.size() == g.size());
  CHECK(r.s_bound_holds);
  CHECK(r.sum_positive);
  bool oracle_w_holds = true;
  for (const BoundRow& row : r.rows) {
    CHECK(row.s < 0.0);
    CHECK(row.w > 0.0);
    CHECK(std::abs(row.s) <= row.s_bound);
    // The claimed W bound exceeds the S bound everywhere.
    CHECK(row.w_bound > row.s_bound);
    const oracle::Dec q = oracle::dec(Real(row.q));
    const double w = static_cast<double>(oracle::w_sum(q, 4000));
    CHECK(row.w == doctest::Approx(w).epsilon(1e-12));
    if (!(w > row.w_bound)) oracle_w_holds = false;
  }
  CHECK(r.w_bound_holds == oracle_w_holds);
  CHECK(4.46 > M_PI * M_PI / 3.0);
}

TEST_CASE("proof constants match the published values") {
  ProofConstants c = proof_constants();
  CHECK(std::abs(c.zeta0 - (-2.685347089)) < 1e-8);
  CHECK(std::abs(c.kappa - 6.82551484) < 1e-7);
  CHECK(std::abs(c.r0 - 1.699895161) < 1e-8);
  CHECK(c.tail_bound < 1e-12);
  CHECK(c.kappa_error < 1e-9);
}

TEST_CASE("proof constants agree with independent computations") {
  ProofConstants c = proof_constants();
  auto u = [](const oracle::Dec& t) { return oracle::u_function(t); };
  const oracle::Dec zeta = oracle::bisect(u, oracle::Dec(-5), oracle::Dec(0), 120);
  CHECK(std::abs(c.zeta0 - static_cast<double>(zeta)) < 1e-12);
  CHECK(std::abs(u_function(c.zeta0)) < 1e-6);
  const double kappa = oracle::kappa_integral();
  CHECK(std::abs(c.kappa - kappa) < 1e-9);
  CHECK(std::abs(c.r0 - w_integrand(-static_cast<double>(zeta))) < 1e-12);
}

TEST_CASE("derivative of |Theta*(q, 5i)|^2 is positive") {
  const std::vector<double> g = grid(0.5, 0.99, 0.005);
  PropMainReport r = check_propmain(g);
  CHECK(r.derivative_positive);
  CHECK(r.modulus_increasing);
  REQUIRE(r.rows.size() == g.size());
  CHECK(std::abs(r.rows.front().modulus - 1.604425279) < 1e-8);
  CHECK(r.rows.front().modulus > 0.25);
}

TEST_CASE("finite difference at q = 0.6 agrees with the differentiated product") {
  PropMainReport r = check_propmain({0.6});
  REQUIRE(r.rows.size() == 1);
  const oracle::Dec q = oracle::dec(Real(0.6));
  const oracle::Dec ref = oracle::star_5i_squared(q, 400) * (oracle::s_sum(q, 400) + oracle::w_sum(q, 400));
  CHECK(r.rows[0].derivative == doctest::Approx(static_cast<double>(ref)).epsilon(1e-4));
}

TEST_CASE("|Theta*| on the right half circle is smallest on the imaginary axis") {
  ArcReport a = check_arc_minimality(Parameter(0.5), 5.0, 721);
  CHECK(a.minimum_on_axis);
  CHECK(a.radial_nondecreasing);
  CHECK(a.radial_min_radius == doctest::Approx(5.0));
  CHECK(a.min_modulus == doctest::Approx(1.6044252746780613).epsilon(1e-12));
  ArcReport b = check_arc_minimality(Parameter(0.9), 10.0, 721);
  CHECK(b.minimum_on_axis);
  CHECK(b.radial_nondecreasing);
  // Reference scan with the series library at the computed minimum.
  EvalResult at_axis = eval_theta_star(Parameter(0.9), Complex(0.0, 10.0));
  CHECK(b.min_modulus == doctest::Approx(d(abs(at_axis.value))).epsilon(1e-9));
}

TEST_CASE("circle estimates at q = 0.63 and q = 0.7") {
  const Parameter q1(Real("0.63"));
  CircleReport a = check_circle_lemma(q1, d(test::neg_power(q1.value(), 7.5)), 721);
  CHECK(a.theta_x0 < Real(-1));
  CHECK(a.floor == 0.75);
  CHECK(a.min_modulus > 0.75);
  CHECK(a.passed);
  const Parameter q2(Real("0.7"));
  CircleReport b = check_circle_lemma(q2, d(test::neg_power(q2.value(), 10.5)), 721);
  CHECK(b.theta_x0 > Real(1));
  CHECK(b.floor == 0.55);
  CHECK(b.min_modulus > 0.55);
  CHECK(b.passed);
}

TEST_CASE("circle estimate needs |theta(x0)| >= 1") {
  const double xi1 = d(find_real_zero(Parameter(0.2), 1).location);
  CHECK(test::error_kind([&] { check_circle_lemma(Parameter(0.2), xi1, 721); }) == ErrorKind::PreconditionUnmet);
  CHECK(test::error_kind([] { check_circle_lemma(Parameter(0.2), -3.0, 721); }) == ErrorKind::Domain);
}

TEST_CASE("second-coefficient quantities") {
  CHECK(std::abs(phi_c1(0.3) - 0.0008803) < 1e-7);
  CHECK(std::abs(phi_c1(0.5) - 0.0277) < 1e-4);
  CHECK(std::abs(rho0() - 45.2548) < 1e-4);
  CHECK(std::abs(c1_margin(0.3) - 0.0230) < 5e-4);
  for (int i = 0; i <= 200; ++i) CHECK(c1_margin(0.3 + 0.001 * i) >= c1_margin(0.3));
}

TEST_CASE("sum over zero pairs reproduces q^3 at q = 0.4") {
  C1Report r = check_c1_coefficient_argument(Parameter(0.4));
  CHECK(std::abs(d(r.s2) - 0.064) < 1e-6);
  CHECK(r.identity_residual < 1e-6);
  CHECK(r.zeros_used >= 60);
  CHECK(r.margin_positive);
  CHECK(r.min_margin == doctest::Approx(0.0230).epsilon(0.02));
  CHECK(r.min_margin_q == doctest::Approx(0.3));
  CHECK(std::abs(r.pair - cd(-4.9272822043, 3.0081831452)) < 1e-9);
  CHECK(test::error_kind([] { check_c1_coefficient_argument(Parameter(0.2)); }) == ErrorKind::Domain);
}

TEST_CASE("tau values at q = 0.2 and monotonicity") {
  TauReport t = check_tau_lemma();
  CHECK(std::abs(d(t.tau1) - (-0.0197796780)) < 1e-9);
  CHECK(std::abs(d(t.tau2) - (-0.367127390)) < 1e-9);
  CHECK(t.tau1_increasing);
  CHECK(t.tau2_increasing);
  const Parameter q(Real("0.1"));
  EvalResult t1 = eval_theta(q, Complex(test::neg_power(q.value(), 1.2), Real(0)));
  EvalResult t2 = eval_theta(q, Complex(test::neg_power(q.value(), 1.8), Real(0)));
  CHECK(t1.value.re < t.tau1);
  CHECK(t2.value.re < t.tau2);
  // Oracle values at q = 0.2.
  const oracle::Dec q2("0.2");
  CHECK(oracle::distance(t.tau1, oracle::theta_real(q2, -pow(q2, oracle::Dec("-1.2")), 100)) < 1e-25);
  CHECK(oracle::distance(t.tau2, oracle::theta_real(q2, -pow(q2, oracle::Dec("-1.8")), 100)) < 1e-25);
}

TEST_CASE("spectral disk radii stay below 49.8") {
  auto radii = spectral_disk_radii();
  REQUIRE(radii.size() == 22);
  for (const auto& [s, r] : radii) {
    CHECK(r < 49.8);
    CHECK(r == doctest::Approx(std::pow(kPublishedSpectrum[s - 1], -2.0 * s - 3.0)));
  }
}
