#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "theta_atlas/series.hpp"

using namespace theta_atlas;
using test::d;

TEST_CASE("precision config validation") {
  CHECK_NOTHROW(PrecisionConfig{}.validate());
  CHECK_NOTHROW(PrecisionConfig::with_target(40).validate());
  CHECK(test::error_kind([] { PrecisionConfig{9, 30}.validate(); }) == ErrorKind::Domain);
  CHECK(test::error_kind([] { PrecisionConfig{30, 35}.validate(); }) == ErrorKind::Domain);
}

TEST_CASE("parameter must lie in (0, 1)") {
  CHECK(test::error_kind([] { Parameter(0.0); }) == ErrorKind::Domain);
  CHECK(test::error_kind([] { Parameter(1.0); }) == ErrorKind::Domain);
  CHECK(test::error_kind([] { Parameter(-0.3); }) == ErrorKind::Domain);
  CHECK_NOTHROW(Parameter(0.999));
}

TEST_CASE("theta at x = 0 is exactly one") {
  EvalResult r = eval_theta(Parameter(0.5), Complex(0.0, 0.0));
  CHECK(r.value.re == Real(1));
  CHECK(r.value.im.is_zero());
}

TEST_CASE("theta rejects non-finite arguments") {
  CHECK(test::error_kind([] { eval_theta(Parameter(0.5), Complex(NAN, 0.0)); }) == ErrorKind::Domain);
  CHECK(test::error_kind([] { eval_theta(Parameter(0.5), Complex(1.0, INFINITY)); }) == ErrorKind::Domain);
}

TEST_CASE("theta(0.2, -0.2^-1.2) matches the published value") {
  const Parameter q(Real("0.2"));
  EvalResult r = eval_theta(q, Complex(test::neg_power(q.value(), 1.2), Real(0)));
  CHECK(std::abs(d(r.value.re) - (-0.0197796780)) < 1e-9);
}

TEST_CASE("theta(0.3, -2.5) agrees with direct summation") {
  const Parameter q(0.3);
  const PrecisionConfig prec{};
  EvalResult r = eval_theta(q, Complex(-2.5, 0.0), prec);
  const oracle::Cx ref = oracle::theta(oracle::dec(q.value()), {oracle::Dec(-2.5), 0}, 200);
  const double scale = std::max(1.0, std::abs(d(r.value.re)));
  CHECK(r.abs_error <= 1e-30 * scale);
  CHECK(oracle::distance(r.value, ref) <= r.abs_error + 1e-40);
  CHECK(r.terms_used >= 2);
}

TEST_CASE("theta error bound follows the requested target") {
  const Parameter q(0.7);
  for (int target : {12, 30, 45}) {
    const PrecisionConfig prec = PrecisionConfig::with_target(target);
    EvalResult r = eval_theta(q, Complex(-9.0, 4.0), prec);
    const oracle::Cx ref = oracle::theta(oracle::dec(q.value()), {oracle::Dec(-9), oracle::Dec(4)}, 400);
    const double scale = std::max(1.0, d(abs(r.value)));
    CHECK(r.abs_error <= std::pow(10.0, -target) * scale);
    CHECK(oracle::distance(r.value, ref) <= r.abs_error);
  }
}

TEST_CASE("Theta*(0.5, 5i) matches the published values") {
  EvalResult r = eval_theta_star(Parameter(0.5), Complex(0.0, 5.0));
  CHECK(std::abs(d(r.value.re) - (-1.542068340)) < 1e-8);
  CHECK(std::abs(d(r.value.im) - 0.4429511372) < 1e-9);
  CHECK(std::abs(d(abs(r.value)) - 1.604425279) < 1e-8);
}

TEST_CASE("Theta*(0.5, 5i) agrees with the bilateral series") {
  const Parameter q(0.5);
  EvalResult r = eval_theta_star(q, Complex(0.0, 5.0));
  const oracle::Cx ref = oracle::bilateral(oracle::dec(q.value()), {0, 5}, 60);
  CHECK(r.abs_error < 1e-30);
  CHECK(oracle::distance(r.value, ref) <= r.abs_error);
  // Digits beyond the published ones.
  CHECK(std::abs(d(r.value.re) - (-1.5420683359792029459)) < 1e-18);
  CHECK(std::abs(d(r.value.im) - 0.44295113635265065840) < 1e-18);
}

TEST_CASE("Theta*(0.5, 2+i) agrees with the bilateral series") {
  const Parameter q(0.5);
  EvalResult r = eval_theta_star(q, Complex(2.0, 1.0));
  const oracle::Cx ref = oracle::bilateral(oracle::dec(q.value()), {2, 1}, 60);
  CHECK(oracle::distance(r.value, ref) <= r.abs_error);
}

TEST_CASE("Theta* vanishes at x = -1 and rejects x = 0") {
  for (double q : {0.1, 0.5, 0.93}) {
    EvalResult r = eval_theta_star(Parameter(q), Complex(-1.0, 0.0));
    CHECK(r.value.is_zero());
  }
  CHECK(test::error_kind([] { eval_theta_star(Parameter(0.5), Complex(0.0, 0.0)); }) == ErrorKind::Domain);
}

TEST_CASE("G is at most 1/4 on |x| = 5") {
  for (double q : {0.05, 0.3, 0.5, 0.8, 0.95}) {
    for (int i = 0; i < 36; ++i) {
      const double t = 2.0 * M_PI * i / 36.0;
      EvalResult r = eval_G(Parameter(q), Complex(5.0 * std::cos(t), 5.0 * std::sin(t)));
      CHECK(d(abs(r.value)) <= 0.25 + r.abs_error);
    }
  }
}

TEST_CASE("G is dominated by its first term for large x") {
  EvalResult r = eval_G(Parameter(0.6), Complex(1e6, 0.0));
  CHECK(std::abs(d(r.value.re) * 1e6 - 1.0) < 1e-6);
}

TEST_CASE("G(0.5, -7) agrees with direct summation") {
  const Parameter q(0.5);
  EvalResult r = eval_G(q, Complex(-7.0, 0.0));
  const oracle::Cx ref = oracle::g_tail(oracle::dec(q.value()), {oracle::Dec(-7), 0}, 100);
  CHECK(oracle::distance(r.value, ref) <= r.abs_error);
  CHECK(test::error_kind([] { eval_G(Parameter(0.5), Complex(0.0, 0.0)); }) == ErrorKind::Domain);
}

TEST_CASE("identities hold at (0.5, 5i)") {
  IdentityResiduals r = check_identities(Parameter(0.5), Complex(0.0, 5.0));
  CHECK(r.within_bounds());
  // The decomposition pins theta(0.5, 5i) to the published Theta* value.
  EvalResult t = eval_theta(Parameter(0.5), Complex(0.0, 5.0));
  EvalResult g = eval_G(Parameter(0.5), Complex(0.0, 5.0));
  CHECK(std::abs(d(t.value.re + g.value.re) - (-1.542068340)) < 1e-8);
}

TEST_CASE("identities at (0.8, -3.7) are below the target") {
  IdentityResiduals r = check_identities(Parameter(0.8), Complex(-3.7, 0.0));
  CHECK(r.within_bounds());
  for (int i = 0; i < 3; ++i) CHECK(r.residual[i] < Real(1e-28));
}

TEST_CASE("Katsnelson family at z = 0 is one") {
  for (double eps : {1e-3, 0.1, 2.0}) {
    EvalResult r = eval_katsnelson_family(Real(eps), Complex(0.0, 0.0));
    CHECK(std::abs(d(r.value.re) - 1.0) < 1e-30);
  }
  CHECK(test::error_kind([] { eval_katsnelson_family(Real(0), Complex(1.0, 0.0)); }) == ErrorKind::Domain);
}

TEST_CASE("Katsnelson family tends to 1/(1-z) inside the contour") {
  const Real eps("0.001");
  EvalResult r = eval_katsnelson_family(eps, Complex(-2.0, 0.0));
  const oracle::Cx ref = oracle::katsnelson(oracle::dec(eps), {oracle::Dec(-2), 0}, 1200);
  CHECK(oracle::distance(r.value, ref) <= r.abs_error + 1e-40);
  CHECK(std::abs(d(r.value.re) - 1.0 / 3.0) < 0.02);
}

TEST_CASE("Katsnelson family grows outside the contour") {
  EvalResult fine = eval_katsnelson_family(Real("0.001"), Complex(2.0, 0.0));
  EvalResult coarse = eval_katsnelson_family(Real("0.01"), Complex(2.0, 0.0));
  const oracle::Cx ref = oracle::katsnelson(oracle::dec(Real("0.01")), {oracle::Dec(2), 0}, 400);
  CHECK(oracle::distance(coarse.value, ref) <= coarse.abs_error + 1e-40);
  CHECK(abs(fine.value) > abs(coarse.value));
}

TEST_CASE("jet derivatives agree with differentiated oracle sums") {
  const Real q(0.8);
  const Complex x(-1.5, 2.0);
  ThetaJet j = theta_jet(q, x, PrecisionConfig{}, kJetValue | kJetDx | kJetDq);
  // Central differences in the oracle.
  const oracle::Dec qd = oracle::dec(q);
  const oracle::Cx xd{oracle::Dec(-1.5), oracle::Dec(2)};
  const oracle::Dec h("1e-60");
  const oracle::Cx dx =
      (oracle::theta(qd, xd + oracle::Cx{h, 0}, 500) - oracle::theta(qd, xd - oracle::Cx{h, 0}, 500)) *
      (1 / (2 * h));
  const oracle::Cx dq = (oracle::theta(qd + h, xd, 500) - oracle::theta(qd - h, xd, 500)) * (1 / (2 * h));
  CHECK(oracle::distance(j.dx, dx) <= j.abs_error[1] + 1e-50);
  CHECK(oracle::distance(j.dq, dq) <= j.abs_error[3] + 1e-50);
}

TEST_CASE("derivative at the published zero near q = 0.8") {
  ThetaJet j = theta_jet(Real(0.8), Complex(0.6128998489, 2.37247194), PrecisionConfig{}, kJetValue | kJetDx);
  CHECK(std::abs(d(j.dx.re) - (-0.6143813197)) < 1e-7);
  CHECK(std::abs(d(j.dx.im) - (-1.099995004)) < 1e-7);
  CHECK(d(abs(j.dx)) > 1.25);
}
