#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "theta_atlas/complexzeros.hpp"
#include "theta_atlas/realzeros.hpp"
#include "theta_atlas/series.hpp"
#include "theta_atlas/spectrum.hpp"

using namespace theta_atlas;
using test::d;

TEST_CASE("first and 25th spectral values match the table") {
  SpectralPoint p1 = find_spectral_point(1);
  CHECK(std::abs(d(p1.q_tilde) - 0.309249) <= 5e-7);
  SpectralPoint p25 = find_spectral_point(25);
  CHECK(std::abs(d(p25.q_tilde) - 0.940393) <= 5e-7);
}

TEST_CASE("spectral points solve theta = theta_x = 0") {
  for (int k : {1, 2, 7, 13}) {
    SpectralPoint p = find_spectral_point(k);
    const oracle::Dec q = oracle::dec(p.q_tilde);
    const oracle::Dec y = oracle::dec(p.y_double);
    const oracle::Dec h("1e-80");
    const oracle::Dec v = oracle::theta_real(q, y, 600);
    const oracle::Dec dv = (oracle::theta_real(q, y + h, 600) - oracle::theta_real(q, y - h, 600)) / (2 * h);
    CHECK(static_cast<double>(abs(v)) < 1e-28);
    CHECK(static_cast<double>(abs(dv)) < 1e-26);
    CHECK(p.residuals[0] < 1e-28);
    CHECK(std::abs(p.theta_xx) > 0.0);
  }
}

TEST_CASE("double zeros lie in their pair interval and left of -5") {
  for (int k = 1; k <= 25; k += 3) {
    SpectralPoint p = find_spectral_point(k);
    const double q = d(p.q_tilde);
    const double y = d(p.y_double);
    CHECK(y > -std::pow(q, -2.0 * k));
    CHECK(y < -std::pow(q, -2.0 * k + 1));
    CHECK(y < -5.0);
  }
}

TEST_CASE("double zeros from k = 15 on stay right of -38.9") {
  for (int k = 15; k <= 25; ++k) {
    SpectralPoint p = find_spectral_point(k);
    CHECK(p.y_double > Real(-38.9));
  }
}

TEST_CASE("spectral values increase") {
  double previous = 0.0;
  for (int k = 1; k <= 30; ++k) {
    const double q = d(find_spectral_point(k).q_tilde);
    CHECK(q > previous);
    previous = q;
  }
}

TEST_CASE("spectral values follow the asymptotic formula") {
  // |q_k - (1 - pi/2k + ln k / 8k^2)| k^2 stays below a constant calibrated
  // once on k = 25..40 (observed 1.61..1.65).
  constexpr double kBound = 2.0;
  const double c25 = spectral_asymptotic_constant();
  CHECK(c25 > 1.5);
  CHECK(c25 < kBound);
  for (int k : {30, 35, 40}) {
    SpectralPoint p = find_spectral_point(k);
    const double gap = std::abs(d(p.q_tilde) - spectral_asymptotic(k)) * k * k;
    CHECK(gap <= kBound);
  }
  CHECK(test::error_kind([] { find_spectral_point(41); }) == ErrorKind::Domain);
  CHECK(test::error_kind([] { find_spectral_point(0); }) == ErrorKind::Domain);
}

TEST_CASE("psi at y = 0") {
  PsiValues p = eval_psi(Real(0.3), Real(0));
  CHECK(std::abs(d(p.psi1) - 1.0) < 1e-30);
  CHECK(p.psi2.is_zero());
}

TEST_CASE("psi splits theta on the imaginary axis") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> vd(0.01, 0.95), yd(0.0, 6.0);
  for (int i = 0; i < 40; ++i) {
    const Real v(vd(rng));
    const Real y(yd(rng));
    PsiValues p = eval_psi(v, y);
    PrecisionScope scope(80);
    const Real q = pow(v, Real(0.25));
    EvalResult t = eval_theta(Parameter(q), Complex(Real(0), y));
    CHECK(d(abs(t.value.re - p.psi1)) <= t.abs_error + p.err1 + 1e-60);
    CHECK(d(abs(t.value.im - p.psi2)) <= t.abs_error + p.err2 + 1e-60);
  }
}

TEST_CASE("psi at (0.2, 2) agrees with direct complex summation") {
  PsiValues p = eval_psi(Real(Real("0.2")), Real(2));
  const oracle::Dec q = pow(oracle::dec("0.2"), oracle::Dec("0.25"));
  const oracle::Cx ref = oracle::theta(q, {0, 2}, 200);
  CHECK(oracle::distance(p.psi1, ref.re) <= p.err1 + 1e-40);
  CHECK(oracle::distance(p.psi2, ref.im) <= p.err2 + 1e-40);
}

TEST_CASE("chi over mu is v^{1/4}") {
  const Real v(0.2);
  ChiMuSequences s = chi_mu_sequences(v, 8);
  REQUIRE(s.chi.size() == 8);
  const double ratio = std::pow(0.2, 0.25);
  for (int k = 0; k < 8; ++k) CHECK(d(s.chi[k] / s.mu[k]) == doctest::Approx(ratio).epsilon(1e-14));
}

TEST_CASE("chi and mu interlace for v = 0.15") {
  ChiMuSequences s = chi_mu_sequences(Real(0.15), 10);
  REQUIRE(s.chi.size() == 10);
  for (int k = 1; k < 10; ++k) {
    CHECK(s.chi[k - 1] < s.mu[k - 1]);
    CHECK(s.mu[k - 1] < s.chi[k]);
    CHECK(s.chi[k] < s.mu[k]);
  }
}

TEST_CASE("chi and mu at v = 0.3 agree with oracle zeros") {
  const Real v(0.3);
  ChiMuSequences s = chi_mu_sequences(v, 6);
  REQUIRE(s.chi.size() == 6);
  const oracle::Dec vd = oracle::dec(v);
  const std::vector<oracle::Dec> xi = oracle::real_zeros(vd, 6, 120, 800, 240);
  REQUIRE(xi.size() == 6);
  for (int k = 0; k < 6; ++k) {
    const oracle::Dec chi = pow(vd, oracle::Dec("0.125")) * sqrt(-xi[k]);
    const oracle::Dec mu = pow(vd, oracle::Dec("-0.125")) * sqrt(-xi[k]);
    CHECK(oracle::distance(s.chi[k], chi) < 1e-25);
    CHECK(oracle::distance(s.mu[k], mu) < 1e-25);
  }
}

TEST_CASE("purely imaginary zeros approach e^{pi/2} from below") {
  const double limit = std::exp(M_PI / 2.0);
  double previous = 0.0;
  for (int k2 : {6, 10, 16}) {
    const double hi = d(find_spectral_point(k2).q_tilde) - 1e-4;
    ImaginaryAxisSolution s = find_imaginary_axis_solution(k2, Real(0.2), Real(hi));
    const double chi = d(s.chi);
    CHECK(chi > 4.0);
    CHECK(chi < 5.0);
    CHECK(chi < limit);
    CHECK(chi > previous);
    previous = chi;
    CHECK(s.residuals[0] < 1e-10);
    CHECK(s.residuals[1] < 1e-10);
    CHECK(s.certificate.certified());
    CHECK(std::abs(d(s.q_star) - std::pow(d(s.v_star), 0.25)) < 1e-15);
    // Independent check that i chi is a zero.
    const oracle::Cx t = oracle::theta(oracle::dec(s.q_star), {0, oracle::dec(s.chi)}, 1500);
    CHECK(static_cast<double>(oracle::modulus(t)) <= s.theta_residual + 1e-40);
  }
}

TEST_CASE("imaginary-axis search needs a crossing") {
  CHECK(test::error_kind([] { find_imaginary_axis_solution(6, Real(0.2), Real(0.3)); }) == ErrorKind::NoCrossing);
}
