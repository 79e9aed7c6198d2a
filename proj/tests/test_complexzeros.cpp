#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "theta_atlas/complexzeros.hpp"
#include "theta_atlas/realzeros.hpp"
#include "theta_atlas/series.hpp"
#include "theta_atlas/spectrum.hpp"

using namespace theta_atlas;
using test::d;

TEST_CASE("truncation at q = 0.8 on radius 50") {
  TruncationPolynomial t = build_truncation(Parameter(0.8), 50.0);
  CHECK(t.degree <= 100);
  CHECK(t.tail_bound_on_disk < 1e-35);
  CHECK(static_cast<int>(t.coefficients.size()) == t.degree + 1);
  // The 101st term at the published zero, and the ratio of the terms after it.
  PrecisionScope scope(60);
  const Real r(2.450361061);
  const Real q(0.8);
  const Real term = pow(q, 101L * 102L / 2L) * pow(r, 101L);
  CHECK(term < Real("2e-460"));
  CHECK(d(pow(q, 102L) * r) < 3.2e-10);
}

TEST_CASE("truncation at q = 0.05 is short") {
  TruncationPolynomial t = build_truncation(Parameter(0.05), 50.0);
  CHECK(t.degree <= 25);
  CHECK(t.tail_bound_on_disk < 1e-30);
  // Direct tail sum.
  const oracle::Dec q = oracle::dec(Real(0.05));
  oracle::Dec tail = 0;
  for (int j = t.degree + 1; j < t.degree + 40; ++j) tail += pow(q, oracle::Dec(j) * (j + 1) / 2) * pow(oracle::Dec(50), j);
  CHECK(tail <= oracle::Dec(t.tail_bound_on_disk));
}

TEST_CASE("tail bound shrinks as the degree grows") {
  const Parameter q(0.7);
  double previous = INFINITY;
  int previous_degree = 0;
  for (int target : {10, 20, 30, 45, 60}) {
    TruncationPolynomial t = build_truncation(q, 20.0, PrecisionConfig::with_target(target));
    CHECK(t.degree >= previous_degree);
    if (t.degree > previous_degree) CHECK(t.tail_bound_on_disk < previous);
    previous = t.tail_bound_on_disk;
    previous_degree = t.degree;
  }
}

TEST_CASE("degree overflow close to q = 1") {
  CHECK(test::error_kind([] { build_truncation(Parameter(0.9995), 55.0); }) == ErrorKind::DegreeOverflow);
}

TEST_CASE("zeros at q = 0.8 include the published pair") {
  ZeroSet zs = find_all_zeros(Parameter(0.8), 50.0);
  CHECK(zs.all_certified());
  auto it = std::find_if(zs.zeros.begin(), zs.zeros.end(), [](const CertifiedZero& z) {
    return std::abs(z.location.to_cd() - std::complex<double>(0.6128998489, 2.37247194)) < 1e-6;
  });
  REQUIRE(it != zs.zeros.end());
  CHECK(std::abs(d(it->location.re) - 0.6128998489) < 1e-8);
  CHECK(std::abs(d(it->location.im) - 2.37247194) < 1e-8);
  CHECK(std::abs(d(abs(it->location)) - 2.450361061) < 1e-8);
  CHECK(it->deriv_lower > 1.25);
  CHECK(it->certified());
  // The conjugate follows.
  auto next = it + 1;
  REQUIRE(next != zs.zeros.end());
  CHECK(next->location.re == it->location.re);
  CHECK((next->location.im + it->location.im).is_zero());
}

TEST_CASE("no complex zeros below the first spectral value") {
  ZeroSet zs = find_all_zeros(Parameter(0.25), 50.0);
  CHECK(zs.pair_count() == 0);
  CHECK(zs.real_count() >= 1);
  for (const CertifiedZero& z : zs.zeros) CHECK(z.is_real());
}

TEST_CASE("one complex pair at q = 0.4") {
  ZeroSet zs = find_all_zeros(Parameter(0.4), 50.0);
  CHECK(zs.pair_count() == 1);
  CHECK(zs.all_certified());
}

TEST_CASE("pair counts between spectral values") {
  CHECK(count_pairs(Parameter(0.2)) == 0);
  CHECK(count_pairs(Parameter(0.55)) == 2);
  CHECK(count_pairs(Parameter(0.72)) == 4);
}

TEST_CASE("certified zeros have small residuals under independent evaluation") {
  for (double q : {0.35, 0.6, 0.85}) {
    const Parameter p(q);
    ZeroSet zs = find_all_zeros(p, 55.0);
    const oracle::Dec qd = oracle::dec(p.value());
    for (const CertifiedZero& z : zs.zeros) {
      REQUIRE(z.certified());
      CHECK(z.residual / z.deriv_lower <= z.cert_radius);
      CHECK(z.newton_step < z.cert_radius / 2);
      // The zero set at q lives on |z| < 55, where 400 terms are plenty.
      const oracle::Cx v = oracle::theta(qd, oracle::cx(z.location), 400);
      CHECK(static_cast<double>(oracle::modulus(v)) <= z.residual);
    }
  }
}

TEST_CASE("zero sets are closed under conjugation and avoid the unit disk") {
  for (double q : {0.33, 0.5, 0.66, 0.75, 0.9}) {
    ZeroSet zs = find_all_zeros(Parameter(q), 55.0);
    for (const CertifiedZero& z : zs.zeros) {
      CHECK(abs(z.location) > Real(1));
      if (z.is_real()) continue;
      const auto c = std::conj(z.location.to_cd());
      const bool found = std::any_of(zs.zeros.begin(), zs.zeros.end(), [&](const CertifiedZero& w) {
        return w.location.re == z.location.re && (w.location.im + z.location.im).is_zero();
      });
      CHECK_MESSAGE(found, "missing conjugate of " << c);
    }
  }
}

TEST_CASE("real zeros agree with the real-axis solver") {
  const Parameter q(0.45);
  ZeroSet zs = find_all_zeros(q, 55.0);
  RealZeroList l = list_real_zeros(q, zs.real_count());
  REQUIRE(static_cast<int>(l.zeros.size()) == zs.real_count());
  int i = 0;
  for (const CertifiedZero& z : zs.zeros) {
    if (!z.is_real()) continue;
    const double tol = z.cert_radius + l.zeros[i].location_error;
    CHECK(std::abs(d(z.location.re - l.zeros[i].location)) <= tol);
    ++i;
  }
}

TEST_CASE("pair count rises by one across the first spectral values") {
  int previous = -1;
  for (int k = 1; k <= 4; ++k) {
    const double qk = kPublishedSpectrum[k - 1];
    const int below = count_pairs(Parameter(qk - 1e-4));
    const int above = count_pairs(Parameter(qk + 1e-4));
    CHECK(below == k - 1);
    CHECK(above == k);
    CHECK(below >= previous);
    previous = above;
  }
}

TEST_CASE("warm starts give the same zeros") {
  const Parameter q0(0.61), q1(0.615);
  ZeroSet a = find_all_zeros(q0, 55.0);
  ZeroSearchOptions opts;
  opts.warm_start = a.truncation_roots;
  ZeroSet warm = find_all_zeros(q1, 55.0, PrecisionConfig{}, opts);
  ZeroSet cold = find_all_zeros(q1, 55.0);
  REQUIRE(warm.zeros.size() == cold.zeros.size());
  for (std::size_t i = 0; i < warm.zeros.size(); ++i) {
    CHECK(std::abs(warm.zeros[i].location.to_cd() - cold.zeros[i].location.to_cd()) < 1e-12);
  }
}
